#include "addrless/prefix_router.hpp"

#include <algorithm>
#include <utility>

namespace addrless::sim {
namespace {

__extension__ using U128 = unsigned __int128;

U128 to_u128(const Ipv6Address& a) { return (static_cast<U128>(a.high()) << 64) | a.low(); }

}  // namespace

void PrefixRouter::add(const RoutingPrefix& prefix, std::size_t device) {
  auto pos = std::find_if(entries_.begin(), entries_.end(),
                          [&](const Entry& e) { return e.prefix.length() < prefix.length(); });
  entries_.insert(pos, Entry{prefix, device});
}

std::optional<std::size_t> PrefixRouter::route(const Ipv6Address& addr) const noexcept {
  for (const auto& e : entries_) {
    if (e.prefix.contains(addr)) return e.device;
  }
  return std::nullopt;
}

bool PrefixRouter::covers(const RoutingPrefix& parent) const {
  // Work in offsets relative to the parent base; sizes up to 2^128 do not fit,
  // so an entry at least as wide as the parent short-circuits.
  std::vector<std::pair<U128, U128>> spans;  // [first, last]
  for (const auto& e : entries_) {
    if (e.prefix.contains(parent)) return true;
    if (!parent.contains(e.prefix)) continue;
    const U128 first = to_u128(e.prefix.base()) - to_u128(parent.base());
    const int host_bits = 128 - e.prefix.length();
    const U128 last = first + (host_bits == 0 ? U128{0} : ((U128{1} << host_bits) - 1));
    spans.emplace_back(first, last);
  }
  if (spans.empty()) return false;
  std::sort(spans.begin(), spans.end());

  const int parent_bits = 128 - parent.length();
  const U128 end = parent_bits == 128 ? ~U128{0} : (U128{1} << parent_bits) - 1;
  U128 next = 0;  // first offset not yet covered
  for (const auto& [first, last] : spans) {
    if (first > next) return false;
    if (last >= end) return true;
    next = std::max(next, last + 1);
  }
  return false;
}

}  // namespace addrless::sim

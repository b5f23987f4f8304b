#include "addrless/ipv6.hpp"

#include <arpa/inet.h>

#include <algorithm>
#include <charconv>

#include "addrless/errors.hpp"

namespace addrless {

Ipv6Address Ipv6Address::from_bytes(std::span<const std::uint8_t, 16> bytes) noexcept {
  std::uint64_t high = 0;
  std::uint64_t low = 0;
  for (int i = 0; i < 8; ++i) high = (high << 8) | bytes[i];
  for (int i = 8; i < 16; ++i) low = (low << 8) | bytes[i];
  return {high, low};
}

std::optional<Ipv6Address> Ipv6Address::parse(std::string_view text) {
  if (text.size() >= INET6_ADDRSTRLEN) return std::nullopt;
  char buf[INET6_ADDRSTRLEN] = {};
  text.copy(buf, text.size());
  std::array<std::uint8_t, 16> bytes{};
  if (inet_pton(AF_INET6, buf, bytes.data()) != 1) return std::nullopt;
  return from_bytes(bytes);
}

Ipv6Address Ipv6Address::from_string(std::string_view text) {
  if (auto addr = parse(text)) return *addr;
  throw ParseError("invalid IPv6 address '" + std::string(text) + "'");
}

std::array<std::uint8_t, 16> Ipv6Address::to_bytes() const noexcept {
  std::array<std::uint8_t, 16> bytes{};
  for (int i = 0; i < 8; ++i) {
    bytes[i] = static_cast<std::uint8_t>(high_ >> (56 - 8 * i));
    bytes[8 + i] = static_cast<std::uint8_t>(low_ >> (56 - 8 * i));
  }
  return bytes;
}

std::string Ipv6Address::to_string() const {
  const auto bytes = to_bytes();
  char buf[INET6_ADDRSTRLEN] = {};
  inet_ntop(AF_INET6, bytes.data(), buf, sizeof buf);
  return buf;
}

std::ostream& operator<<(std::ostream& os, const Ipv6Address& addr) { return os << addr.to_string(); }

Ipv6Address prefix_mask(int length) noexcept {
  if (length <= 0) return {};
  if (length >= 128) return {~0ULL, ~0ULL};
  if (length <= 64) {
    return {length == 64 ? ~0ULL : ~(~0ULL >> length), 0};
  }
  return {~0ULL, ~(~0ULL >> (length - 64))};
}

namespace {

Ipv6Address mask(const Ipv6Address& addr, int length) noexcept {
  const Ipv6Address m = prefix_mask(length);
  return {addr.high() & m.high(), addr.low() & m.low()};
}

}  // namespace

RoutingPrefix::RoutingPrefix(Ipv6Address base, int length) : base_(base), length_(length) {
  if (length < 0 || length > 128) {
    throw ParseError("prefix length " + std::to_string(length) + " outside [0, 128]");
  }
  if (mask(base, length) != base) {
    throw ParseError("prefix " + base.to_string() + "/" + std::to_string(length) +
                     " has bits set past its length");
  }
}

RoutingPrefix RoutingPrefix::containing(const Ipv6Address& addr, int length) {
  return RoutingPrefix(mask(addr, std::clamp(length, 0, 128)), length);
}

RoutingPrefix RoutingPrefix::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    throw ParseError("prefix '" + std::string(text) + "' lacks a /length");
  }
  const auto addr = Ipv6Address::from_string(text.substr(0, slash));
  const auto len_text = text.substr(slash + 1);
  int length = -1;
  auto [ptr, ec] = std::from_chars(len_text.data(), len_text.data() + len_text.size(), length);
  if (ec != std::errc{} || ptr != len_text.data() + len_text.size()) {
    throw ParseError("bad prefix length in '" + std::string(text) + "'");
  }
  return RoutingPrefix(addr, length);
}

bool RoutingPrefix::contains(const Ipv6Address& addr) const noexcept {
  return mask(addr, length_) == base_;
}

bool RoutingPrefix::contains(const RoutingPrefix& other) const noexcept {
  return other.length_ >= length_ && contains(other.base_);
}

RoutingPrefix RoutingPrefix::subnet64(std::uint64_t index) const {
  if (length_ > 64) throw PrefixLengthError("subnet64 needs a prefix of /64 or shorter");
  if (length_ < 64 && length_ > 0 && (index >> (64 - length_)) != 0) {
    throw DomainError("subnet index out of range for " + to_string());
  }
  if (length_ == 64 && index != 0) throw DomainError("a /64 has only subnet 0");
  return RoutingPrefix(Ipv6Address(base_.high() | index, 0), 64);
}

Ipv6Address RoutingPrefix::with_suffix(std::uint64_t suffix) const {
  if (length_ > 64) throw PrefixLengthError("with_suffix needs a prefix of /64 or shorter");
  return {base_.high(), suffix};
}

std::string RoutingPrefix::to_string() const { return base_.to_string() + "/" + std::to_string(length_); }

std::ostream& operator<<(std::ostream& os, const RoutingPrefix& prefix) { return os << prefix.to_string(); }

}  // namespace addrless

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "addrless/ipv6.hpp"

namespace addrless::sim {

/// Longest-prefix-match table from prefixes to device indices.
class PrefixRouter {
 public:
  void add(const RoutingPrefix& prefix, std::size_t device);

  std::optional<std::size_t> route(const Ipv6Address& addr) const noexcept;

  /// True when every address under `parent` matches some entry.
  bool covers(const RoutingPrefix& parent) const;

  std::size_t size() const noexcept { return entries_.size(); }

 private:
  struct Entry {
    RoutingPrefix prefix;
    std::size_t device;
  };
  std::vector<Entry> entries_;  // longest first
};

}  // namespace addrless::sim

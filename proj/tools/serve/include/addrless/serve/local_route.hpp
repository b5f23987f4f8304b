#pragma once

#include "addrless/ipv6.hpp"

namespace addrless::serve {

/// Installs `local <prefix> dev lo table local` over rtnetlink so that the
/// host accepts connections to every address under the prefix, and removes it
/// again on destruction. Requires CAP_NET_ADMIN.
///
/// A route that already exists is left in place and not removed later.
class LocalRoute {
 public:
  /// Throws std::system_error when the kernel rejects the request.
  explicit LocalRoute(const RoutingPrefix& prefix);
  ~LocalRoute();

  LocalRoute(const LocalRoute&) = delete;
  LocalRoute& operator=(const LocalRoute&) = delete;

  const RoutingPrefix& prefix() const noexcept { return prefix_; }
  bool installed_by_us() const noexcept { return owned_; }

 private:
  RoutingPrefix prefix_;
  bool owned_ = false;
};

}  // namespace addrless::serve

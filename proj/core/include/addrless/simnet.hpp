#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "addrless/cipher.hpp"
#include "addrless/ipv6.hpp"
#include "addrless/scenario.hpp"

namespace addrless::sim {

/// Throws InvalidScenarioError describing the first problem found.
void validate_scenario(const Scenario& scenario);

/// Runs the scenario to completion. Same scenario and seed give identical
/// metrics. Single-threaded; independent runs may execute in parallel.
SimMetrics run_scenario(const Scenario& scenario);

/// Per-device share of admitted flows. Throws DomainError when no flow was
/// admitted or the metrics do not match the topology.
std::vector<double> lb_shares(const SimMetrics& metrics, const std::vector<RoutingPrefix>& topology);

/// The counter-synchronised salt that the stateless time salt replaces.
///
/// Entrance and gateway each hold a counter. Generation uses the entrance
/// counter and advances it; verification accepts only the gateway's current
/// counter and advances it on success. Out-of-order arrivals therefore fail,
/// and the two counters stay apart afterwards.
class StatefulSaltCodec {
 public:
  explicit StatefulSaltCodec(std::shared_ptr<const BlockCipher> cipher, std::uint64_t initial_state = 0);

  Ipv6Address generate(const Ipv6Address& source, const RoutingPrefix& prefix);
  bool verify(const Ipv6Address& source, const Ipv6Address& destination, const RoutingPrefix& prefix);

  std::uint64_t entrance_state() const noexcept { return entrance_state_; }
  std::uint64_t gateway_state() const noexcept { return gateway_state_; }

 private:
  std::shared_ptr<const BlockCipher> cipher_;
  std::uint64_t entrance_state_;
  std::uint64_t gateway_state_;
};

}  // namespace addrless::sim

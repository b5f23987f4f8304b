#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "addrless/codec.hpp"
#include "addrless/ipv6.hpp"

namespace addrless {

struct FlowKey {
  Ipv6Address src;
  Ipv6Address dst;
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;
  std::uint8_t protocol = 6;  // IANA protocol number

  friend bool operator==(const FlowKey&, const FlowKey&) = default;
};

struct FlowKeyHash {
  std::size_t operator()(const FlowKey& key) const noexcept;
};

enum class Verdict { AdmitNew, PassEstablished, Drop };

enum class VerdictReason { InWindow, Table, OutOfWindow, Cache };

struct Decision {
  Verdict verdict = Verdict::Drop;
  VerdictReason reason = VerdictReason::OutOfWindow;

  friend bool operator==(const Decision&, const Decision&) = default;
};

std::string_view verdict_name(Verdict v) noexcept;        // admit | pass | drop
std::string_view reason_name(VerdictReason r) noexcept;   // in-window | table | out-of-window | cache

/// verdict=<admit|pass|drop> src=<addr> dst=<addr> reason=<...>
std::string format_verdict_log(const Decision& decision, const FlowKey& key);

struct GatewayConfig {
  RoutingPrefix prefix{Ipv6Address{}, 64};
  bool cache_mode = false;
  std::int64_t idle_timeout_ms = 300'000;
};

/// Answers "is this (src, dst) pair legitimate right now?".
using Verifier = std::function<bool(const Ipv6Address& src, const Ipv6Address& dst, TimeMs now_ms)>;

struct ExpireCounts {
  std::size_t flows = 0;
  std::size_t cache_entries = 0;

  std::size_t total() const noexcept { return flows + cache_entries; }
};

/// Per-flow admission filter in front of the main service.
///
/// Each flow is verified once, at its first packet; later packets match the
/// flow table. With cache mode on, a destination address that was admitted
/// for one flow is refused for any other flow until theta has passed since
/// that flow ended. All member functions are thread-safe.
class Gateway {
 public:
  Gateway(GatewayConfig config, AddressCodec codec);

  /// For tests and simulations that swap the verification function.
  /// cache_retention_ms plays the role of theta.
  Gateway(GatewayConfig config, Verifier verifier, std::int64_t cache_retention_ms);

  Decision admit_packet(const FlowKey& key, bool is_flow_start, TimeMs now_ms);

  /// Unknown flows are ignored.
  void record_flow_end(const FlowKey& key, TimeMs now_ms);

  ExpireCounts expire(TimeMs now_ms);

  /// Receives one format_verdict_log() line per decision.
  void set_log_sink(std::function<void(const std::string&)> sink);

  std::size_t flow_count() const;
  std::size_t cache_size() const;
  const GatewayConfig& config() const noexcept { return config_; }

 private:
  struct FlowState {
    TimeMs admitted_at = 0;
    TimeMs last_seen = 0;
  };

  struct UsedAddress {
    std::int64_t open_flows = 0;
    TimeMs ended_at = 0;
  };

  struct Shard {
    mutable std::mutex mu;
    std::unordered_map<FlowKey, FlowState, FlowKeyHash> flows;
  };

  static constexpr std::size_t kShards = 16;

  GatewayConfig config_;
  Verifier verifier_;
  std::int64_t retention_ms_;
  std::array<Shard, kShards> shards_;

  // Always locked after a shard lock, never before.
  mutable std::mutex cache_mu_;
  std::unordered_map<Ipv6Address, UsedAddress, Ipv6AddressHash> cache_;

  std::mutex log_mu_;
  std::function<void(const std::string&)> log_sink_;

  Shard& shard_for(const FlowKey& key) noexcept;
  bool cache_blocks(const Ipv6Address& dst, TimeMs now_ms);  // cache_mu_ held
  void release_address(const Ipv6Address& dst, TimeMs now_ms);
  Decision log(Decision decision, const FlowKey& key);
};

}  // namespace addrless

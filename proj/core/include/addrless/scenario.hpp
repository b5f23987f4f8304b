#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "addrless/cipher.hpp"
#include "addrless/codec.hpp"
#include "addrless/entrance.hpp"
#include "addrless/ipv6.hpp"

namespace addrless::sim {

enum class ScenarioKind { Legit, BruteScan, HitlistScan, Replay, StatefulRace, RandomLb, DynamicLb };

std::string_view scenario_kind_name(ScenarioKind kind) noexcept;
ScenarioKind parse_scenario_kind(std::string_view name);

/// Uniform integer delay in [min_ms, max_ms]; min == max is a fixed delay.
struct DelayRange {
  std::int64_t min_ms = 0;
  std::int64_t max_ms = 0;

  static constexpr DelayRange fixed(std::int64_t ms) noexcept { return {ms, ms}; }
};

/// Delay terms of the entrance -> client -> gateway path.
struct LinkProfile {
  DelayRange client_to_entrance = DelayRange::fixed(10);
  DelayRange entrance_to_client = DelayRange::fixed(10);   // T_trans_en
  DelayRange client_to_gateway = DelayRange::fixed(10);    // T_trans_ma
  DelayRange client_processing = DelayRange::fixed(1);     // T_pro_cl
  std::int64_t entrance_processing_ms = 0;                 // T_pro_en
  std::int64_t gateway_processing_ms = 0;                  // T_pro_ma
  std::int64_t clock_skew_ms = 0;                          // T_syn, gateway clock minus entrance clock
};

struct TrafficParams {
  std::size_t clients = 0;
  DelayRange interarrival = DelayRange::fixed(10);
  DelayRange flow_duration = DelayRange::fixed(100);
  RoutingPrefix client_prefix = RoutingPrefix::parse("2001:db8::/32");
};

struct ScanParams {
  std::size_t probes = 0;
  std::int64_t probe_interval_ms = 1;
  std::int64_t start_ms = 0;
  /// Enumerate the whole suffix block instead of drawing at random (toy16 only).
  bool sweep = false;
  /// Source address the scanner presents; a known client in the brute-force model.
  Ipv6Address target_source = Ipv6Address::from_string("2001:db8::a");
};

struct AttackerParams {
  Ipv6Address source = Ipv6Address::from_string("2001:db8:bad::1");
  /// Chance that a legitimate flow crossing the tapped link is observed.
  double intercept_probability = 1.0;
  DelayRange probe_delay = DelayRange::fixed(20);
};

struct HitlistParams {
  /// Probes per structured pattern family.
  std::size_t pattern_probes = 0;
  /// Delay between an observed flow ending and the attacker probing its address.
  std::int64_t observed_lag_ms = 1000;
};

struct ReplayParams {
  /// Delay between an observed flow ending and the replayed flow start.
  std::int64_t lag_after_end_ms = 1;
};

struct GatewayParams {
  bool cache_mode = false;
  std::int64_t idle_timeout_ms = 300'000;
};

enum class SaltMode { Stateless, Stateful };

struct RaceClient {
  std::int64_t request_at_ms = 0;
  /// Entrance to gateway path delay as seen by this client.
  std::int64_t delay_ms = 0;
};

struct RaceParams {
  SaltMode salt_mode = SaltMode::Stateful;
  std::vector<RaceClient> clients;
  /// Extra clients with seeded arrival gaps and path delays.
  std::size_t random_clients = 0;
  DelayRange random_interarrival = DelayRange::fixed(5);
  DelayRange random_delay = DelayRange::fixed(10);
};

struct LbParams {
  /// Sub-prefixes owned by gateway devices. random_lb: longest-prefix-match
  /// routes under the /64; dynamic_lb: one /64 per device.
  std::vector<RoutingPrefix> devices;
  LbKind strategy = LbKind::RoundRobin;
};

/// Declarative simulator input. Every field has a default; a scenario file
/// only needs "kind".
struct Scenario {
  ScenarioKind kind = ScenarioKind::Legit;
  std::uint64_t seed = 1;
  CipherKind cipher = CipherKind::ReferenceDes;
  CipherKey key = CipherKey::from_u64(0x0123456789ABCDEFULL);
  SaltParams salt{0, 5, VerifyWindow::symmetric(10'000)};
  RoutingPrefix prefix = RoutingPrefix::parse("2001:da8::/64");
  /// Absolute clock value at virtual time 0.
  TimeMs epoch_ms = 1'700'000'000'000;

  LinkProfile links;
  TrafficParams traffic;
  ScanParams scan;
  AttackerParams attacker;
  HitlistParams hitlist;
  ReplayParams replay;
  GatewayParams gateway;
  RaceParams race;
  LbParams lb;
};

struct LatencySummary {
  std::uint64_t count = 0;
  double mean_ms = 0.0;
  std::int64_t min_ms = 0;
  std::int64_t max_ms = 0;

  void add(std::int64_t sample) noexcept;

  friend bool operator==(const LatencySummary&, const LatencySummary&) = default;

 private:
  double sum_ = 0.0;
};

struct SimMetrics {
  std::uint64_t requests = 0;
  std::uint64_t redirects = 0;
  std::uint64_t flow_starts = 0;
  std::uint64_t admits = 0;
  std::uint64_t drops = 0;
  std::uint64_t false_rejects = 0;
  std::uint64_t scan_trials = 0;
  std::uint64_t scan_hits = 0;
  std::uint64_t replay_attempts = 0;
  std::uint64_t replay_hits = 0;
  /// Response packets the gateways emitted, split by the flow's verdict.
  std::uint64_t egress_admitted = 0;
  std::uint64_t egress_dropped = 0;
  std::vector<std::uint64_t> device_admits;
  std::vector<std::string> device_labels;
  /// End-to-end lag between stamping at the entrance and verifying at the
  /// gateway, and its components.
  LatencySummary delta_t;
  LatencySummary trans_en;
  LatencySummary trans_ma;
  LatencySummary pro_cl;
  std::uint64_t events = 0;

  friend bool operator==(const SimMetrics&, const SimMetrics&) = default;
};

/// Throws ParseError / InvalidScenarioError.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const Scenario& scenario);

std::string metrics_to_json(const SimMetrics& metrics);

}  // namespace addrless::sim

#include "addrless/simnet.hpp"

#include <optional>
#include <string>

#include "addrless/codec.hpp"
#include "addrless/entrance.hpp"
#include "addrless/errors.hpp"
#include "addrless/event_queue.hpp"
#include "addrless/gateway.hpp"
#include "addrless/prefix_router.hpp"

namespace addrless::sim {

StatefulSaltCodec::StatefulSaltCodec(std::shared_ptr<const BlockCipher> cipher, std::uint64_t initial_state)
    : cipher_(std::move(cipher)), entrance_state_(initial_state), gateway_state_(initial_state) {}

Ipv6Address StatefulSaltCodec::generate(const Ipv6Address& source, const RoutingPrefix& prefix) {
  const std::uint64_t plain = apply_salt(hash_source(source), Salt{entrance_state_++}) & cipher_->block_mask();
  return prefix.with_suffix(cipher_->encrypt(plain));
}

bool StatefulSaltCodec::verify(const Ipv6Address& source, const Ipv6Address& destination,
                               const RoutingPrefix& prefix) {
  if (!prefix.contains(destination)) return false;
  const std::uint64_t mask = cipher_->block_mask();
  if ((destination.low() & ~mask) != 0) return false;
  const std::uint64_t salt = (cipher_->decrypt(destination.low()) ^ hash_source(source)) & mask;
  if (salt != (gateway_state_ & mask)) return false;
  ++gateway_state_;
  return true;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidScenarioError(what);
}

void check_delay(const DelayRange& d, const std::string& name) {
  require(d.min_ms >= 0 && d.max_ms >= d.min_ms, name + " must satisfy 0 <= min <= max");
}

}  // namespace

void validate_scenario(const Scenario& s) {
  try {
    s.salt.validate();
  } catch (const DomainError& e) {
    throw InvalidScenarioError(e.what());
  }
  require(s.key.size() == cipher_key_size(s.cipher),
          "key size does not match cipher " + std::string(cipher_name(s.cipher)));
  require(s.prefix.length() == 64, "scenario prefix must be a /64");
  check_delay(s.links.client_to_entrance, "links.client_to_entrance_ms");
  check_delay(s.links.entrance_to_client, "links.entrance_to_client_ms");
  check_delay(s.links.client_to_gateway, "links.client_to_gateway_ms");
  check_delay(s.links.client_processing, "links.client_processing_ms");
  check_delay(s.traffic.interarrival, "traffic.interarrival_ms");
  check_delay(s.traffic.flow_duration, "traffic.flow_duration_ms");
  check_delay(s.attacker.probe_delay, "attacker.probe_delay_ms");
  check_delay(s.race.random_interarrival, "race.random_interarrival_ms");
  check_delay(s.race.random_delay, "race.random_delay_ms");
  require(s.links.entrance_processing_ms >= 0 && s.links.gateway_processing_ms >= 0,
          "processing delays must be non-negative");
  require(s.attacker.intercept_probability >= 0.0 && s.attacker.intercept_probability <= 1.0,
          "attacker.intercept_probability must lie in [0, 1]");
  require(s.scan.probe_interval_ms >= 0 && s.scan.start_ms >= 0, "scan timing must be non-negative");
  require(s.hitlist.observed_lag_ms >= 0 && s.replay.lag_after_end_ms >= 0, "attack lags must be non-negative");
  require(s.gateway.idle_timeout_ms > 0, "gateway.idle_timeout_ms must be positive");
  require(s.epoch_ms >= s.salt.t0_ms, "epoch_ms must not precede salt.t0_ms");

  switch (s.kind) {
    case ScenarioKind::Legit:
    case ScenarioKind::HitlistScan:
    case ScenarioKind::Replay:
      require(s.traffic.clients > 0 || s.kind == ScenarioKind::HitlistScan, "traffic.clients must be positive");
      require(s.kind != ScenarioKind::HitlistScan || s.traffic.clients > 0 || s.hitlist.pattern_probes > 0,
              "hitlist_scan needs observed traffic or pattern probes");
      break;
    case ScenarioKind::BruteScan:
      require(s.scan.probes > 0 || s.scan.sweep, "brute_scan needs scan.probes > 0 or scan.sweep");
      require(!s.scan.sweep || s.cipher == CipherKind::Toy16, "scan.sweep is only feasible with the toy16 cipher");
      break;
    case ScenarioKind::StatefulRace:
      require(!s.race.clients.empty() || s.race.random_clients > 0, "stateful_race needs clients");
      for (const auto& c : s.race.clients) {
        require(c.request_at_ms >= 0 && c.delay_ms >= 0, "race client times must be non-negative");
      }
      break;
    case ScenarioKind::RandomLb: {
      require(s.traffic.clients > 0, "traffic.clients must be positive");
      require(!s.lb.devices.empty(), "random_lb needs lb.devices");
      PrefixRouter router;
      for (std::size_t i = 0; i < s.lb.devices.size(); ++i) {
        require(s.prefix.contains(s.lb.devices[i]), s.lb.devices[i].to_string() + " is not inside " + s.prefix.to_string());
        router.add(s.lb.devices[i], i);
      }
      require(router.covers(s.prefix), "lb.devices do not cover the whole " + s.prefix.to_string());
      break;
    }
    case ScenarioKind::DynamicLb:
      require(s.traffic.clients > 0, "traffic.clients must be positive");
      require(s.lb.devices.size() >= 2, "dynamic_lb needs at least two device prefixes");
      require(s.lb.strategy != LbKind::Static, "dynamic_lb needs round-robin or least-connections");
      for (const auto& d : s.lb.devices) require(d.length() == 64, "dynamic_lb device prefixes must be /64");
      break;
  }
}

namespace {

constexpr std::uint16_t kServicePort = 80;

class Simulation {
 public:
  explicit Simulation(const Scenario& s)
      : s_(s),
        rng_(s.seed),
        cipher_(make_cipher(s.cipher, s.key)),
        codec_(cipher_, s.salt) {}

  SimMetrics run() {
    setup();
    switch (s_.kind) {
      case ScenarioKind::StatefulRace:
        schedule_race_clients();
        break;
      case ScenarioKind::BruteScan:
        if (s_.scan.sweep || s_.scan.probes > 0) schedule_brute_probe(0);
        break;
      case ScenarioKind::HitlistScan:
        if (s_.hitlist.pattern_probes > 0) schedule_pattern_probe(0);
        break;
      default:
        break;
    }
    if (s_.kind != ScenarioKind::StatefulRace) schedule_legit_clients();
    clock_.run();
    m_.events = clock_.executed();
    return m_;
  }

 private:
  enum class Tap { None, Hitlist, Replay };

  const Scenario& s_;
  SimClock clock_;
  SimRng rng_;
  std::shared_ptr<const BlockCipher> cipher_;
  AddressCodec codec_;
  std::optional<StatefulSaltCodec> stateful_;
  std::optional<LbStrategy> strategy_;
  std::vector<std::unique_ptr<Gateway>> devices_;
  PrefixRouter router_;
  bool feedback_ = false;
  SimMetrics m_;

  TimeMs entrance_clock() const { return s_.epoch_ms + clock_.now(); }
  TimeMs gateway_clock() const { return s_.epoch_ms + clock_.now() + s_.links.clock_skew_ms; }
  std::int64_t draw(const DelayRange& d) { return rng_.between(d.min_ms, d.max_ms); }
  std::uint16_t random_port() { return static_cast<std::uint16_t>(1024 + rng_.below(65536 - 1024)); }

  Ipv6Address random_client() {
    const RoutingPrefix& p = s_.traffic.client_prefix;
    const Ipv6Address host_mask = prefix_mask(p.length());
    const Ipv6Address r(rng_.next(), rng_.next());
    return {p.base().high() | (r.high() & ~host_mask.high()), p.base().low() | (r.low() & ~host_mask.low())};
  }

  void add_device(const RoutingPrefix& verify_prefix, const RoutingPrefix& route) {
    GatewayConfig cfg{verify_prefix, s_.gateway.cache_mode, s_.gateway.idle_timeout_ms};
    if (stateful_) {
      auto* codec = &*stateful_;
      devices_.push_back(std::make_unique<Gateway>(
          cfg,
          [codec, verify_prefix](const Ipv6Address& src, const Ipv6Address& dst, TimeMs) {
            return codec->verify(src, dst, verify_prefix);
          },
          s_.salt.window.length_ms()));
    } else {
      devices_.push_back(std::make_unique<Gateway>(cfg, codec_));
    }
    router_.add(route, devices_.size() - 1);
    m_.device_labels.push_back(route.to_string());
    m_.device_admits.push_back(0);
  }

  void setup() {
    if (s_.kind == ScenarioKind::StatefulRace && s_.race.salt_mode == SaltMode::Stateful) {
      stateful_.emplace(cipher_);
    }
    switch (s_.kind) {
      case ScenarioKind::RandomLb:
        strategy_.emplace(LbKind::Static, std::vector<RoutingPrefix>{s_.prefix});
        for (const auto& d : s_.lb.devices) add_device(s_.prefix, d);
        break;
      case ScenarioKind::DynamicLb:
        strategy_.emplace(s_.lb.strategy, s_.lb.devices, /*load_feedback=*/true);
        feedback_ = true;
        for (const auto& d : s_.lb.devices) add_device(d, d);
        break;
      default:
        strategy_.emplace(LbKind::Static, std::vector<RoutingPrefix>{s_.prefix});
        add_device(s_.prefix, s_.prefix);
        break;
    }
  }

  // Gateway side of a flow start. Returns the admitting device.
  std::optional<std::size_t> flow_start(const FlowKey& key) {
    ++m_.flow_starts;
    const auto dev = router_.route(key.dst);
    if (!dev) {
      ++m_.drops;
      return std::nullopt;
    }
    const Decision d = devices_[*dev]->admit_packet(key, true, gateway_clock());
    if (d.verdict == Verdict::Drop) {
      ++m_.drops;
      return std::nullopt;
    }
    ++m_.admits;
    ++m_.device_admits[*dev];
    respond(d);
    return dev;
  }

  // The only path by which a gateway emits bytes toward a client.
  void respond(const Decision& d) {
    if (d.verdict == Verdict::Drop) {
      ++m_.egress_dropped;
    } else {
      ++m_.egress_admitted;
    }
  }

  void end_flow(std::size_t device, const FlowKey& key) {
    devices_[device]->record_flow_end(key, gateway_clock());
    if (feedback_) strategy_->connection_closed(device);
  }

  void schedule_legit_clients() {
    std::int64_t t = 0;
    for (std::size_t i = 0; i < s_.traffic.clients; ++i) {
      if (i > 0) t += draw(s_.traffic.interarrival);
      const Ipv6Address client = random_client();
      clock_.schedule_at(t + draw(s_.links.client_to_entrance), [this, client] { at_entrance(client); });
    }
  }

  Tap tap_kind() const {
    switch (s_.kind) {
      case ScenarioKind::HitlistScan:
        return Tap::Hitlist;
      case ScenarioKind::Replay:
        return Tap::Replay;
      default:
        return Tap::None;
    }
  }

  void at_entrance(const Ipv6Address& client) {
    ++m_.requests;
    const std::size_t index = strategy_->select_index();
    const TimeMs stamp = entrance_clock();
    const Ipv6Address target = codec_.generate(client, strategy_->prefixes()[index], stamp);
    ++m_.redirects;

    const std::int64_t trans_en = draw(s_.links.entrance_to_client);
    const std::int64_t pro_cl = draw(s_.links.client_processing);
    const std::int64_t trans_ma = draw(s_.links.client_to_gateway);
    const std::int64_t total =
        s_.links.entrance_processing_ms + trans_en + pro_cl + trans_ma + s_.links.gateway_processing_ms;
    const FlowKey key{client, target, random_port(), kServicePort, 6};

    clock_.schedule_in(total, [this, key, stamp, trans_en, pro_cl, trans_ma] {
      m_.trans_en.add(trans_en);
      m_.pro_cl.add(pro_cl);
      m_.trans_ma.add(trans_ma);
      m_.delta_t.add(gateway_clock() - stamp);
      legit_flow_arrives(key);
    });
  }

  void legit_flow_arrives(const FlowKey& key) {
    const auto dev = flow_start(key);
    if (!dev) {
      ++m_.false_rejects;
      return;
    }
    if (feedback_) strategy_->connection_opened(*dev);
    const Tap tap = tap_kind();
    const bool observed = tap != Tap::None && rng_.chance(s_.attacker.intercept_probability);
    const std::int64_t duration = draw(s_.traffic.flow_duration);
    const std::size_t device = *dev;
    clock_.schedule_in(duration, [this, key, device, tap, observed] {
      end_flow(device, key);
      if (!observed) return;
      if (tap == Tap::Hitlist) {
        clock_.schedule_in(s_.hitlist.observed_lag_ms, [this, dst = key.dst] {
          send_probe(FlowKey{s_.attacker.source, dst, random_port(), kServicePort, 6});
        });
      } else {
        clock_.schedule_in(s_.replay.lag_after_end_ms, [this, key] { send_replay(key); });
      }
    });
  }

  void send_probe(const FlowKey& key) {
    ++m_.scan_trials;
    clock_.schedule_in(draw(s_.attacker.probe_delay), [this, key] {
      if (const auto dev = flow_start(key)) {
        ++m_.scan_hits;
        end_flow(*dev, key);
      }
    });
  }

  void send_replay(const FlowKey& observed) {
    ++m_.replay_attempts;
    const FlowKey key{observed.src, observed.dst, random_port(), observed.dst_port, observed.protocol};
    clock_.schedule_in(draw(s_.attacker.probe_delay), [this, key] {
      if (const auto dev = flow_start(key)) {
        ++m_.replay_hits;
        end_flow(*dev, key);
      }
    });
  }

  std::size_t brute_probe_count() const {
    return s_.scan.sweep ? (std::size_t{1} << cipher_->block_bits()) : s_.scan.probes;
  }

  void schedule_brute_probe(std::size_t i) {
    clock_.schedule_at(s_.scan.start_ms + static_cast<std::int64_t>(i) * s_.scan.probe_interval_ms, [this, i] {
      const std::uint64_t suffix = s_.scan.sweep ? i : (rng_.next() & cipher_->block_mask());
      send_probe(FlowKey{s_.scan.target_source, s_.prefix.with_suffix(suffix), random_port(), kServicePort, 6});
      if (i + 1 < brute_probe_count()) schedule_brute_probe(i + 1);
    });
  }

  // Structured hitlist candidates: counting low bits, zero high half, zero low half.
  void schedule_pattern_probe(std::size_t j) {
    clock_.schedule_at(s_.scan.start_ms + static_cast<std::int64_t>(j) * s_.scan.probe_interval_ms, [this, j] {
      std::uint64_t suffix = 0;
      switch (j % 3) {
        case 0:
          suffix = j / 3 + 1;
          break;
        case 1:
          suffix = rng_.next() & 0xFFFFFFFFULL;
          break;
        default:
          suffix = rng_.next() & 0xFFFFFFFF00000000ULL;
          break;
      }
      send_probe(FlowKey{s_.attacker.source, s_.prefix.with_suffix(suffix), random_port(), kServicePort, 6});
      if (j + 1 < 3 * s_.hitlist.pattern_probes) schedule_pattern_probe(j + 1);
    });
  }

  void schedule_race_clients() {
    std::vector<RaceClient> clients = s_.race.clients;
    std::int64_t t = 0;
    for (std::size_t i = 0; i < s_.race.random_clients; ++i) {
      if (i > 0) t += draw(s_.race.random_interarrival);
      clients.push_back({t, draw(s_.race.random_delay)});
    }
    for (const auto& c : clients) {
      const Ipv6Address client = random_client();
      const std::int64_t delay = c.delay_ms;
      clock_.schedule_at(c.request_at_ms, [this, client, delay] {
        ++m_.requests;
        const TimeMs stamp = entrance_clock();
        const Ipv6Address target =
            stateful_ ? stateful_->generate(client, s_.prefix) : codec_.generate(client, s_.prefix, stamp);
        ++m_.redirects;
        const FlowKey key{client, target, random_port(), kServicePort, 6};
        clock_.schedule_in(delay, [this, key, stamp] {
          m_.delta_t.add(gateway_clock() - stamp);
          const auto dev = flow_start(key);
          if (!dev) {
            ++m_.false_rejects;
            return;
          }
          const std::size_t device = *dev;
          clock_.schedule_in(draw(s_.traffic.flow_duration), [this, key, device] { end_flow(device, key); });
        });
      });
    }
  }
};

}  // namespace

SimMetrics run_scenario(const Scenario& scenario) {
  validate_scenario(scenario);
  return Simulation(scenario).run();
}

std::vector<double> lb_shares(const SimMetrics& metrics, const std::vector<RoutingPrefix>& topology) {
  if (metrics.device_admits.size() != topology.size()) {
    throw DomainError("metrics cover " + std::to_string(metrics.device_admits.size()) + " devices, topology has " +
                      std::to_string(topology.size()));
  }
  std::uint64_t total = 0;
  for (auto n : metrics.device_admits) total += n;
  if (total == 0) throw DomainError("no admitted flows to compute load shares from");
  std::vector<double> shares;
  shares.reserve(topology.size());
  for (auto n : metrics.device_admits) shares.push_back(static_cast<double>(n) / static_cast<double>(total));
  return shares;
}

}  // namespace addrless::sim

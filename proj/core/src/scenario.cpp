#include "addrless/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <nlohmann/json.hpp>

#include "addrless/errors.hpp"

namespace addrless::sim {

using nlohmann::json;

std::string_view scenario_kind_name(ScenarioKind kind) noexcept {
  switch (kind) {
    case ScenarioKind::Legit:
      return "legit";
    case ScenarioKind::BruteScan:
      return "brute_scan";
    case ScenarioKind::HitlistScan:
      return "hitlist_scan";
    case ScenarioKind::Replay:
      return "replay";
    case ScenarioKind::StatefulRace:
      return "stateful_race";
    case ScenarioKind::RandomLb:
      return "random_lb";
    case ScenarioKind::DynamicLb:
      return "dynamic_lb";
  }
  return "unknown";
}

ScenarioKind parse_scenario_kind(std::string_view name) {
  for (auto k : {ScenarioKind::Legit, ScenarioKind::BruteScan, ScenarioKind::HitlistScan, ScenarioKind::Replay,
                 ScenarioKind::StatefulRace, ScenarioKind::RandomLb, ScenarioKind::DynamicLb}) {
    if (scenario_kind_name(k) == name) return k;
  }
  throw ParseError("unknown scenario kind '" + std::string(name) + "'");
}

void LatencySummary::add(std::int64_t sample) noexcept {
  if (count == 0 || sample < min_ms) min_ms = sample;
  if (count == 0 || sample > max_ms) max_ms = sample;
  ++count;
  sum_ += static_cast<double>(sample);
  mean_ms = sum_ / static_cast<double>(count);
}

namespace {

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!obj.is_object()) throw ParseError(std::string(where) + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParseError("unknown field '" + key + "' in " + std::string(where));
    }
  }
}

DelayRange read_delay(const json& j) {
  if (j.is_number_integer()) return DelayRange::fixed(j.get<std::int64_t>());
  check_keys(j, {"min", "max"}, "delay");
  return {j.at("min").get<std::int64_t>(), j.at("max").get<std::int64_t>()};
}

json write_delay(const DelayRange& d) {
  if (d.min_ms == d.max_ms) return d.min_ms;
  return {{"min", d.min_ms}, {"max", d.max_ms}};
}

template <typename T>
void read_opt(const json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end()) out = it->get<T>();
}

void read_opt_delay(const json& obj, const char* key, DelayRange& out) {
  if (auto it = obj.find(key); it != obj.end()) out = read_delay(*it);
}

void read_opt_addr(const json& obj, const char* key, Ipv6Address& out) {
  if (auto it = obj.find(key); it != obj.end()) out = Ipv6Address::from_string(it->get<std::string>());
}

SaltParams read_salt(const json& j) {
  check_keys(j, {"t0_ms", "step_x_ms", "window"}, "salt");
  SaltParams p;
  read_opt(j, "t0_ms", p.t0_ms);
  read_opt(j, "step_x_ms", p.step_ms);
  if (auto it = j.find("window"); it != j.end()) {
    const json& w = *it;
    check_keys(w, {"kind", "threshold_ms", "threshold1_ms", "threshold2_ms"}, "salt.window");
    const auto kind = w.value("kind", std::string("symmetric"));
    if (kind == "symmetric") {
      p.window = VerifyWindow::symmetric(w.at("threshold_ms").get<std::int64_t>());
    } else if (kind == "asymmetric") {
      p.window = VerifyWindow::asymmetric(w.at("threshold1_ms").get<std::int64_t>(),
                                          w.at("threshold2_ms").get<std::int64_t>());
    } else {
      throw ParseError("salt.window.kind must be symmetric or asymmetric");
    }
  }
  return p;
}

json write_salt(const SaltParams& p) {
  json w;
  if (p.window.kind == VerifyWindow::Kind::Symmetric) {
    w = {{"kind", "symmetric"}, {"threshold_ms", p.window.upper_ms}};
  } else {
    w = {{"kind", "asymmetric"}, {"threshold1_ms", -p.window.lower_ms}, {"threshold2_ms", p.window.upper_ms}};
  }
  return {{"t0_ms", p.t0_ms}, {"step_x_ms", p.step_ms}, {"window", w}};
}

Scenario from_json(const json& j) {
  check_keys(j,
             {"kind", "seed", "cipher", "key", "salt", "prefix", "epoch_ms", "links", "traffic", "scan", "attacker",
              "hitlist", "replay", "gateway", "race", "lb"},
             "scenario");
  Scenario s;
  s.kind = parse_scenario_kind(j.at("kind").get<std::string>());
  read_opt(j, "seed", s.seed);
  if (auto it = j.find("cipher"); it != j.end()) {
    s.cipher = parse_cipher_name(it->get<std::string>());
    if (s.cipher == CipherKind::Toy16) s.key = CipherKey::from_u16(0x1A2B);
  }
  if (auto it = j.find("key"); it != j.end()) s.key = CipherKey::from_hex(it->get<std::string>());
  if (auto it = j.find("salt"); it != j.end()) s.salt = read_salt(*it);
  if (auto it = j.find("prefix"); it != j.end()) s.prefix = RoutingPrefix::parse(it->get<std::string>());
  read_opt(j, "epoch_ms", s.epoch_ms);

  if (auto it = j.find("links"); it != j.end()) {
    const json& l = *it;
    check_keys(l,
               {"client_to_entrance_ms", "entrance_to_client_ms", "client_to_gateway_ms", "client_processing_ms",
                "entrance_processing_ms", "gateway_processing_ms", "clock_skew_ms"},
               "links");
    read_opt_delay(l, "client_to_entrance_ms", s.links.client_to_entrance);
    read_opt_delay(l, "entrance_to_client_ms", s.links.entrance_to_client);
    read_opt_delay(l, "client_to_gateway_ms", s.links.client_to_gateway);
    read_opt_delay(l, "client_processing_ms", s.links.client_processing);
    read_opt(l, "entrance_processing_ms", s.links.entrance_processing_ms);
    read_opt(l, "gateway_processing_ms", s.links.gateway_processing_ms);
    read_opt(l, "clock_skew_ms", s.links.clock_skew_ms);
  }
  if (auto it = j.find("traffic"); it != j.end()) {
    const json& t = *it;
    check_keys(t, {"clients", "interarrival_ms", "flow_duration_ms", "client_prefix"}, "traffic");
    read_opt(t, "clients", s.traffic.clients);
    read_opt_delay(t, "interarrival_ms", s.traffic.interarrival);
    read_opt_delay(t, "flow_duration_ms", s.traffic.flow_duration);
    if (auto p = t.find("client_prefix"); p != t.end()) {
      s.traffic.client_prefix = RoutingPrefix::parse(p->get<std::string>());
    }
  }
  if (auto it = j.find("scan"); it != j.end()) {
    const json& sc = *it;
    check_keys(sc, {"probes", "probe_interval_ms", "start_ms", "sweep", "target_source"}, "scan");
    read_opt(sc, "probes", s.scan.probes);
    read_opt(sc, "probe_interval_ms", s.scan.probe_interval_ms);
    read_opt(sc, "start_ms", s.scan.start_ms);
    read_opt(sc, "sweep", s.scan.sweep);
    read_opt_addr(sc, "target_source", s.scan.target_source);
  }
  if (auto it = j.find("attacker"); it != j.end()) {
    const json& a = *it;
    check_keys(a, {"source", "intercept_probability", "probe_delay_ms"}, "attacker");
    read_opt_addr(a, "source", s.attacker.source);
    read_opt(a, "intercept_probability", s.attacker.intercept_probability);
    read_opt_delay(a, "probe_delay_ms", s.attacker.probe_delay);
  }
  if (auto it = j.find("hitlist"); it != j.end()) {
    check_keys(*it, {"pattern_probes", "observed_lag_ms"}, "hitlist");
    read_opt(*it, "pattern_probes", s.hitlist.pattern_probes);
    read_opt(*it, "observed_lag_ms", s.hitlist.observed_lag_ms);
  }
  if (auto it = j.find("replay"); it != j.end()) {
    check_keys(*it, {"lag_after_end_ms"}, "replay");
    read_opt(*it, "lag_after_end_ms", s.replay.lag_after_end_ms);
  }
  if (auto it = j.find("gateway"); it != j.end()) {
    check_keys(*it, {"cache_mode", "idle_timeout_ms"}, "gateway");
    read_opt(*it, "cache_mode", s.gateway.cache_mode);
    read_opt(*it, "idle_timeout_ms", s.gateway.idle_timeout_ms);
  }
  if (auto it = j.find("race"); it != j.end()) {
    const json& r = *it;
    check_keys(r, {"salt_mode", "clients", "random_clients", "random_interarrival_ms", "random_delay_ms"}, "race");
    if (auto m = r.find("salt_mode"); m != r.end()) {
      const auto mode = m->get<std::string>();
      if (mode == "stateful") {
        s.race.salt_mode = SaltMode::Stateful;
      } else if (mode == "stateless") {
        s.race.salt_mode = SaltMode::Stateless;
      } else {
        throw ParseError("race.salt_mode must be stateful or stateless");
      }
    }
    if (auto c = r.find("clients"); c != r.end()) {
      for (const json& cj : *c) {
        check_keys(cj, {"request_at_ms", "delay_ms"}, "race.clients[]");
        s.race.clients.push_back({cj.at("request_at_ms").get<std::int64_t>(), cj.at("delay_ms").get<std::int64_t>()});
      }
    }
    read_opt(r, "random_clients", s.race.random_clients);
    read_opt_delay(r, "random_interarrival_ms", s.race.random_interarrival);
    read_opt_delay(r, "random_delay_ms", s.race.random_delay);
  }
  if (auto it = j.find("lb"); it != j.end()) {
    const json& l = *it;
    check_keys(l, {"devices", "strategy"}, "lb");
    if (auto d = l.find("devices"); d != l.end()) {
      for (const json& p : *d) s.lb.devices.push_back(RoutingPrefix::parse(p.get<std::string>()));
    }
    if (auto st = l.find("strategy"); st != l.end()) s.lb.strategy = parse_lb_kind(st->get<std::string>());
  }
  return s;
}

json latency_json(const LatencySummary& l) {
  return {{"count", l.count}, {"mean_ms", l.mean_ms}, {"min_ms", l.min_ms}, {"max_ms", l.max_ms}};
}

}  // namespace

Scenario parse_scenario(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
  }
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed scenario: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["kind"] = scenario_kind_name(s.kind);
  j["seed"] = s.seed;
  j["cipher"] = cipher_name(s.cipher);
  j["key"] = s.key.to_hex();
  j["salt"] = write_salt(s.salt);
  j["prefix"] = s.prefix.to_string();
  j["epoch_ms"] = s.epoch_ms;
  j["links"] = {{"client_to_entrance_ms", write_delay(s.links.client_to_entrance)},
                {"entrance_to_client_ms", write_delay(s.links.entrance_to_client)},
                {"client_to_gateway_ms", write_delay(s.links.client_to_gateway)},
                {"client_processing_ms", write_delay(s.links.client_processing)},
                {"entrance_processing_ms", s.links.entrance_processing_ms},
                {"gateway_processing_ms", s.links.gateway_processing_ms},
                {"clock_skew_ms", s.links.clock_skew_ms}};
  j["traffic"] = {{"clients", s.traffic.clients},
                  {"interarrival_ms", write_delay(s.traffic.interarrival)},
                  {"flow_duration_ms", write_delay(s.traffic.flow_duration)},
                  {"client_prefix", s.traffic.client_prefix.to_string()}};
  j["scan"] = {{"probes", s.scan.probes},
               {"probe_interval_ms", s.scan.probe_interval_ms},
               {"start_ms", s.scan.start_ms},
               {"sweep", s.scan.sweep},
               {"target_source", s.scan.target_source.to_string()}};
  j["attacker"] = {{"source", s.attacker.source.to_string()},
                   {"intercept_probability", s.attacker.intercept_probability},
                   {"probe_delay_ms", write_delay(s.attacker.probe_delay)}};
  j["hitlist"] = {{"pattern_probes", s.hitlist.pattern_probes}, {"observed_lag_ms", s.hitlist.observed_lag_ms}};
  j["replay"] = {{"lag_after_end_ms", s.replay.lag_after_end_ms}};
  j["gateway"] = {{"cache_mode", s.gateway.cache_mode}, {"idle_timeout_ms", s.gateway.idle_timeout_ms}};
  json clients = json::array();
  for (const auto& c : s.race.clients) clients.push_back({{"request_at_ms", c.request_at_ms}, {"delay_ms", c.delay_ms}});
  j["race"] = {{"salt_mode", s.race.salt_mode == SaltMode::Stateful ? "stateful" : "stateless"},
               {"clients", clients},
               {"random_clients", s.race.random_clients},
               {"random_interarrival_ms", write_delay(s.race.random_interarrival)},
               {"random_delay_ms", write_delay(s.race.random_delay)}};
  json devices = json::array();
  for (const auto& d : s.lb.devices) devices.push_back(d.to_string());
  j["lb"] = {{"devices", devices}, {"strategy", lb_kind_name(s.lb.strategy)}};
  return j.dump(2);
}

std::string metrics_to_json(const SimMetrics& m) {
  json j;
  j["requests"] = m.requests;
  j["redirects"] = m.redirects;
  j["flow_starts"] = m.flow_starts;
  j["admits"] = m.admits;
  j["drops"] = m.drops;
  j["false_rejects"] = m.false_rejects;
  j["scan_trials"] = m.scan_trials;
  j["scan_hits"] = m.scan_hits;
  j["replay_attempts"] = m.replay_attempts;
  j["replay_hits"] = m.replay_hits;
  j["egress_admitted"] = m.egress_admitted;
  j["egress_dropped"] = m.egress_dropped;
  json devices = json::array();
  std::uint64_t total = 0;
  for (auto n : m.device_admits) total += n;
  for (std::size_t i = 0; i < m.device_admits.size(); ++i) {
    devices.push_back({{"prefix", i < m.device_labels.size() ? m.device_labels[i] : std::string()},
                       {"admits", m.device_admits[i]},
                       {"share", total ? static_cast<double>(m.device_admits[i]) / static_cast<double>(total) : 0.0}});
  }
  j["devices"] = devices;
  j["latency"] = {{"delta_t", latency_json(m.delta_t)},
                  {"trans_en", latency_json(m.trans_en)},
                  {"trans_ma", latency_json(m.trans_ma)},
                  {"pro_cl", latency_json(m.pro_cl)}};
  j["events"] = m.events;
  return j.dump(2);
}

}  // namespace addrless::sim

#include "commands.hpp"

#include <signal.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "addrless/analysis.hpp"
#include "addrless/config.hpp"
#include "addrless/errors.hpp"
#include "addrless/serve/entrance_server.hpp"
#include "addrless/serve/gateway_server.hpp"
#include "addrless/serve/local_route.hpp"
#include "addrless/simnet.hpp"

namespace addrless::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

SharedConfig load(const std::string& path, bool insecure) {
  return load_config(path, LoadOptions{.allow_insecure = insecure, .load_key = true});
}

// Writes to the named file, or stdout when the name is empty.
void emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << text;
}

// Blocks until SIGINT or SIGTERM. The signals are masked in every thread
// started afterwards.
class SignalWaiter {
 public:
  SignalWaiter() {
    sigemptyset(&set_);
    sigaddset(&set_, SIGINT);
    sigaddset(&set_, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set_, nullptr);
  }
  void wait() {
    int sig = 0;
    sigwait(&set_, &sig);
  }

 private:
  sigset_t set_{};
};

std::vector<Ipv6Address> read_sources(const SampleArgs& s) {
  std::vector<Ipv6Address> out;
  for (const auto& src : s.sources) out.push_back(Ipv6Address::from_string(src));
  if (!s.sources_file.empty()) {
    std::ifstream f(s.sources_file);
    if (!f) throw ParseError("cannot open " + s.sources_file);
    std::string line;
    while (std::getline(f, line)) {
      if (line.empty() || line[0] == '#') continue;
      out.push_back(Ipv6Address::from_string(line));
    }
  }
  if (out.empty()) out.push_back(Ipv6Address::from_string("2001:db8::a"));
  return out;
}

analysis::SuffixSampleSet load_samples(const SampleArgs& s) {
  analysis::SuffixSampleSet set;
  if (!s.input.empty()) {
    std::ifstream f(s.input);
    if (!f) throw ParseError("cannot open " + s.input);
    set.suffixes = analysis::read_suffix_list(f);
    set.provenance = analysis::Provenance::Collected;
    return set;
  }
  if (s.config.empty()) throw ParseError("either --input or --config is required");

  const auto config = load(s.config, s.insecure);
  const auto codec = make_codec(config);
  const auto sources = read_sources(s);
  const auto& prefix = config.prefixes.front();
  const std::int64_t interval = s.interval_ms.value_or(config.salt.step_ms);
  set.suffixes.reserve(s.count);
  for (std::size_t i = 0; i < s.count; ++i) {
    const TimeMs now = config.salt.t0_ms + s.start_ms + static_cast<std::int64_t>(i) * interval;
    set.suffixes.push_back(codec.generate(sources[i % sources.size()], prefix, now).low());
  }
  return set;
}

std::pair<int, std::uint64_t> margin_inputs(const AnalyzeArgs& a) {
  if (!a.samples.config.empty()) {
    const auto config = load_config(a.samples.config, LoadOptions{.allow_insecure = true, .load_key = false});
    return {a.bits.value_or(config.suffix_bits()), a.salts.value_or(config.live_salts())};
  }
  if (!a.bits || !a.salts) throw ParseError("--bits and --salts (or --config) are required");
  return {*a.bits, *a.salts};
}

TimeMs now_or_wall(const std::optional<std::int64_t>& now) { return now.value_or(serve::wall_clock_ms()); }

}  // namespace

int run_keygen(const KeygenArgs& args) {
  const auto kind = parse_cipher_name(args.cipher);
  const auto key = generate_key(kind);
  write_key_file(args.out, key);
  std::cerr << "wrote " << cipher_key_size(kind) << "-byte " << args.cipher << " key to " << args.out << '\n';
  if (args.config_out.empty()) return kExitOk;

  if (args.prefixes.empty()) throw ParseError("--prefix is required with --config");
  SharedConfig c;
  c.cipher = kind;
  const auto config_dir = fs::absolute(args.config_out).parent_path();
  c.key_file = fs::relative(fs::absolute(args.out), config_dir);
  c.salt.t0_ms = serve::wall_clock_ms();
  c.salt.step_ms = args.step_ms;
  c.salt.window = VerifyWindow::symmetric(args.threshold_ms);
  for (const auto& p : args.prefixes) c.prefixes.push_back(RoutingPrefix::parse(p));
  c.lb_strategy = c.prefixes.size() > 1 ? LbKind::RoundRobin : LbKind::Static;
  c.insecure = args.insecure;
  emit(args.config_out, config_to_json(c));
  std::cerr << "wrote config template to " << args.config_out << " (t0_ms " << c.salt.t0_ms << ")\n";
  return kExitOk;
}

int run_genaddr(const GenaddrArgs& args) {
  const auto config = load(args.config, args.insecure);
  if (args.prefix_index >= config.prefixes.size()) throw ParseError("--prefix-index out of range");
  const auto codec = make_codec(config);
  const auto source = Ipv6Address::from_string(args.source);
  std::cout << codec.generate(source, config.prefixes[args.prefix_index], now_or_wall(args.now_ms)).to_string() << '\n';
  return kExitOk;
}

int run_verify(const VerifyArgs& args) {
  const auto config = load(args.config, args.insecure);
  const auto codec = make_codec(config);
  const auto source = Ipv6Address::from_string(args.source);
  const auto dest = Ipv6Address::from_string(args.destination);
  const TimeMs now = now_or_wall(args.now_ms);
  bool ok = false;
  for (const auto& p : config.prefixes) {
    if (p.contains(dest)) ok = codec.verify(source, dest, p, now);
  }
  std::cout << (ok ? "true" : "false") << '\n';
  return ok ? kExitOk : kExitVerifyFalse;
}

int run_entrance_serve(const ServeArgs& args) {
  const auto config = load(args.config, args.insecure);
  spdlog::set_level(args.verbose ? spdlog::level::debug : spdlog::level::info);
  if (config.lb_strategy == LbKind::LeastConnections) {
    spdlog::warn("least-connections has no load feedback in service mode; using round-robin");
  }
  SignalWaiter signals;
  auto entrance = std::make_shared<Entrance>(make_codec(config),
                                             LbStrategy(config.lb_strategy, config.prefixes, false),
                                             config.ports.service, config.auth);
  serve::EntranceServerOptions options;
  options.listen = config.listen;
  options.port = config.ports.entrance;
  options.log = [](const std::string& line) { spdlog::debug("{}", line); };
  serve::EntranceServer server(entrance, options);
  server.start();
  spdlog::info("entrance listening on [{}]:{}, redirecting to port {}", config.listen, server.port(),
               config.ports.service);
  signals.wait();
  server.stop();
  return kExitOk;
}

int run_gateway_serve(const ServeArgs& args) {
  const auto config = load(args.config, args.insecure);
  spdlog::set_level(args.verbose ? spdlog::level::debug : spdlog::level::info);
  SignalWaiter signals;

  std::vector<std::unique_ptr<serve::LocalRoute>> routes;
  if (args.anyip_route) {
    for (const auto& p : config.prefixes) {
      routes.push_back(std::make_unique<serve::LocalRoute>(p));
      spdlog::info("local route for {} {}", p.to_string(), routes.back()->installed_by_us() ? "installed" : "present");
    }
  }

  const auto codec = make_codec(config);
  std::vector<std::shared_ptr<Gateway>> gateways;
  for (const auto& p : config.prefixes) {
    auto g = std::make_shared<Gateway>(GatewayConfig{p, config.cache_mode, config.idle_timeout_ms}, codec);
    g->set_log_sink([](const std::string& line) {
      if (line.rfind("verdict=drop", 0) == 0) {
        spdlog::debug("{}", line);
      } else {
        spdlog::info("{}", line);
      }
    });
    gateways.push_back(std::move(g));
  }

  serve::GatewayServerOptions options;
  options.listen = config.listen;
  options.port = config.ports.service;
  serve::GatewayServer server(gateways, options);
  server.start();
  spdlog::info("gateway listening on [{}]:{} for {} prefix(es)", config.listen, server.port(), gateways.size());
  signals.wait();
  server.stop();
  return kExitOk;
}

int run_sim(const SimArgs& args) {
  auto scenario = sim::load_scenario(args.scenario);
  if (args.seed) scenario.seed = *args.seed;
  const auto metrics = sim::run_scenario(scenario);
  emit(args.out, sim::metrics_to_json(metrics));
  return kExitOk;
}

int run_analyze_entropy(const AnalyzeArgs& args) {
  const auto samples = load_samples(args.samples);
  const auto report = analysis::nybble_entropy(samples.suffixes);
  json j = {{"samples", report.samples},
            {"provenance", analysis::provenance_name(samples.provenance)},
            {"nybbles", report.nybbles},
            {"min", *std::min_element(report.nybbles.begin(), report.nybbles.end())}};
  emit(args.out, j.dump(2) + "\n");
  return kExitOk;
}

int run_analyze_scatter(const AnalyzeArgs& args) {
  const auto samples = load_samples(args.samples);
  const auto tag = analysis::provenance_name(samples.provenance);
  std::ostringstream csv;
  csv.precision(10);
  csv << "x,y,tag\n";
  for (const auto& p : analysis::scatter_points(samples.suffixes)) csv << p.x << ',' << p.y << ',' << tag << '\n';
  emit(args.out, csv.str());
  return kExitOk;
}

int run_analyze_uniformity(const AnalyzeArgs& args) {
  const auto samples = load_samples(args.samples);
  const auto r = analysis::grid_uniformity(samples.suffixes, args.grid, args.alpha);
  json j = {{"samples", samples.suffixes.size()},
            {"grid", args.grid},
            {"statistic", r.statistic},
            {"critical_value", r.critical_value},
            {"degrees_of_freedom", r.degrees_of_freedom},
            {"alpha", r.alpha},
            {"pass", r.pass}};
  emit(args.out, j.dump(2) + "\n");
  return kExitOk;
}

int run_analyze_scantime(const AnalyzeArgs& args) {
  const auto [bits, salts] = margin_inputs(args);
  json j = {{"suffix_bits", bits},
            {"p_salts", salts},
            {"expected_scan_time", analysis::expected_scan_time(bits, salts)},
            {"unit", "formula units"},
            {"note", "3*2^(N-32)/(4P) evaluated verbatim; the time unit of the formula is not stated, see README"}};
  emit(args.out, j.dump(2) + "\n");
  return kExitOk;
}

int run_analyze_margin(const AnalyzeArgs& args) {
  const auto [bits, salts] = margin_inputs(args);
  const auto m = analysis::security_margin(bits, salts);
  json j = {{"suffix_bits", bits},
            {"p_salts", salts},
            {"margin", m.margin},
            {"required", analysis::kSafeMarginBits},
            {"safe", m.safe}};
  emit(args.out, j.dump(2) + "\n");
  return kExitOk;
}

}  // namespace addrless::cli

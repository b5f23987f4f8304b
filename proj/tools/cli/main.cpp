#include <exception>
#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "addrless/errors.hpp"
#include "commands.hpp"

using namespace addrless::cli;

namespace {

void add_sample_options(CLI::App* cmd, SampleArgs& s) {
  cmd->add_option("--input", s.input, "Suffix list, one 16-digit hex suffix per line");
  cmd->add_option("--config", s.config, "Generate suffixes with this configuration instead");
  cmd->add_option("--sources", s.sources, "Source addresses to generate for")->delimiter(',');
  cmd->add_option("--sources-file", s.sources_file, "File with one source address per line");
  cmd->add_option("--count", s.count, "Number of suffixes to generate");
  cmd->add_option("--start-ms", s.start_ms, "Offset of the first sample from t0");
  cmd->add_option("--interval-ms", s.interval_ms, "Clock advance per sample (default: step)");
  cmd->add_flag("--insecure", s.insecure, "Accept configurations below the security margin");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"addrless: per-connection address generation, verification and simulation"};
  app.require_subcommand(1);

  std::function<int()> action;

  KeygenArgs keygen;
  auto* kg = app.add_subcommand("keygen", "Write a random key file, and optionally a config template");
  kg->add_option("--cipher", keygen.cipher, "reference-des or toy16")->check(CLI::IsMember({"reference-des", "toy16"}));
  kg->add_option("--out", keygen.out, "Key file to write")->required();
  kg->add_option("--config", keygen.config_out, "Also write a config template here");
  kg->add_option("--prefix", keygen.prefixes, "Delegated /64 for the template (repeatable)");
  kg->add_option("--step-ms", keygen.step_ms, "Salt step X for the template");
  kg->add_option("--threshold-ms", keygen.threshold_ms, "Window threshold for the template");
  kg->add_flag("--insecure", keygen.insecure, "Mark the template insecure (needed for toy16)");
  kg->callback([&] { action = [&] { return run_keygen(keygen); }; });

  GenaddrArgs genaddr;
  auto* ga = app.add_subcommand("genaddr", "Generate the destination address for a source");
  ga->add_option("--config", genaddr.config)->required();
  ga->add_option("--source", genaddr.source, "Client source address")->required();
  ga->add_option("--now-ms", genaddr.now_ms, "Clock value (default: wall clock)");
  ga->add_option("--prefix-index", genaddr.prefix_index, "Which configured prefix to use");
  ga->add_flag("--insecure", genaddr.insecure);
  ga->callback([&] { action = [&] { return run_genaddr(genaddr); }; });

  VerifyArgs verify;
  auto* vf = app.add_subcommand("verify", "Verify a (source, destination) pair; exit 0 if valid, 1 if not");
  vf->add_option("--config", verify.config)->required();
  vf->add_option("--source", verify.source)->required();
  vf->add_option("--dest", verify.destination)->required();
  vf->add_option("--now-ms", verify.now_ms, "Clock value (default: wall clock)");
  vf->add_flag("--insecure", verify.insecure);
  vf->callback([&] { action = [&] { return run_verify(verify); }; });

  ServeArgs entrance_serve;
  auto* en = app.add_subcommand("entrance", "Entrance service");
  en->require_subcommand(1);
  auto* en_serve = en->add_subcommand("serve", "Serve HTTP redirects");
  en_serve->add_option("--config", entrance_serve.config)->required();
  en_serve->add_flag("--insecure", entrance_serve.insecure);
  en_serve->add_flag("-v,--verbose", entrance_serve.verbose);
  en_serve->callback([&] { action = [&] { return run_entrance_serve(entrance_serve); }; });

  ServeArgs gateway_serve;
  auto* gw = app.add_subcommand("gateway", "Verification gateway");
  gw->require_subcommand(1);
  auto* gw_serve = gw->add_subcommand("serve", "Serve the demo page on verified addresses");
  gw_serve->add_option("--config", gateway_serve.config)->required();
  gw_serve->add_flag("--insecure", gateway_serve.insecure);
  gw_serve->add_flag("-v,--verbose", gateway_serve.verbose, "Log every verdict, drops included");
  gw_serve->add_flag("--anyip-route", gateway_serve.anyip_route,
                     "Install a local route for each prefix (needs CAP_NET_ADMIN)");
  gw_serve->callback([&] { action = [&] { return run_gateway_serve(gateway_serve); }; });

  SimArgs sim;
  auto* sm = app.add_subcommand("sim", "Discrete-event simulator");
  sm->require_subcommand(1);
  auto* sm_run = sm->add_subcommand("run", "Run a scenario file");
  sm_run->add_option("--scenario", sim.scenario)->required()->check(CLI::ExistingFile);
  sm_run->add_option("--seed", sim.seed, "Override the scenario seed");
  sm_run->add_option("--out", sim.out, "Metrics JSON (default: stdout)");
  sm_run->callback([&] { action = [&] { return run_sim(sim); }; });

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "Suffix statistics and security calculators");
  an->require_subcommand(1);
  auto* an_entropy = an->add_subcommand("entropy", "Per-nybble normalised entropy (JSON)");
  auto* an_scatter = an->add_subcommand("scatter", "Scatter coordinates (CSV x,y,tag)");
  auto* an_uniform = an->add_subcommand("uniformity", "Chi-square grid uniformity (JSON)");
  for (auto* cmd : {an_entropy, an_scatter, an_uniform}) {
    add_sample_options(cmd, analyze.samples);
    cmd->add_option("--out", analyze.out, "Output file (default: stdout)");
  }
  an_uniform->add_option("--grid", analyze.grid, "Cells per axis");
  an_uniform->add_option("--alpha", analyze.alpha, "Significance level");
  auto* an_scan = an->add_subcommand("scantime", "Expected brute-force scan time (JSON)");
  auto* an_margin = an->add_subcommand("margin", "Security margin N - log2 P (JSON)");
  for (auto* cmd : {an_scan, an_margin}) {
    cmd->add_option("--bits", analyze.bits, "Suffix bits N");
    cmd->add_option("--salts", analyze.salts, "Live salts P");
    cmd->add_option("--config", analyze.samples.config, "Derive N and P from a configuration");
    cmd->add_flag("--insecure", analyze.samples.insecure);
    cmd->add_option("--out", analyze.out, "Output file (default: stdout)");
  }
  an_entropy->callback([&] { action = [&] { return run_analyze_entropy(analyze); }; });
  an_scatter->callback([&] { action = [&] { return run_analyze_scatter(analyze); }; });
  an_uniform->callback([&] { action = [&] { return run_analyze_uniformity(analyze); }; });
  an_scan->callback([&] { action = [&] { return run_analyze_scantime(analyze); }; });
  an_margin->callback([&] { action = [&] { return run_analyze_margin(analyze); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const addrless::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

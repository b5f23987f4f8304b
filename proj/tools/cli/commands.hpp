#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace addrless::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFalse = 1;
inline constexpr int kExitUsage = 2;

struct KeygenArgs {
  std::string cipher = "reference-des";
  std::string out;
  std::string config_out;
  std::vector<std::string> prefixes;
  std::int64_t step_ms = 5;
  std::int64_t threshold_ms = 10'000;
  bool insecure = false;
};

struct GenaddrArgs {
  std::string config;
  std::string source;
  std::optional<std::int64_t> now_ms;
  std::size_t prefix_index = 0;
  bool insecure = false;
};

struct VerifyArgs {
  std::string config;
  std::string source;
  std::string destination;
  std::optional<std::int64_t> now_ms;
  bool insecure = false;
};

struct ServeArgs {
  std::string config;
  bool insecure = false;
  bool verbose = false;
  bool anyip_route = false;
};

struct SimArgs {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string out;
};

/// Where analyze gets its suffixes: a file, or generated in-process.
struct SampleArgs {
  std::string input;
  std::string config;
  std::vector<std::string> sources;
  std::string sources_file;
  std::size_t count = 100'000;
  std::int64_t start_ms = 0;
  std::optional<std::int64_t> interval_ms;
  bool insecure = false;
};

struct AnalyzeArgs {
  SampleArgs samples;
  std::string out;
  int grid = 16;
  double alpha = 0.001;
  std::optional<int> bits;
  std::optional<std::uint64_t> salts;
};

int run_keygen(const KeygenArgs& args);
int run_genaddr(const GenaddrArgs& args);
int run_verify(const VerifyArgs& args);
int run_entrance_serve(const ServeArgs& args);
int run_gateway_serve(const ServeArgs& args);
int run_sim(const SimArgs& args);
int run_analyze_entropy(const AnalyzeArgs& args);
int run_analyze_scatter(const AnalyzeArgs& args);
int run_analyze_uniformity(const AnalyzeArgs& args);
int run_analyze_scantime(const AnalyzeArgs& args);
int run_analyze_margin(const AnalyzeArgs& args);

}  // namespace addrless::cli

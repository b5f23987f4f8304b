#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <span>
#include <string_view>
#include <vector>

namespace addrless::analysis {

enum class Provenance { Generated, Collected };

std::string_view provenance_name(Provenance p) noexcept;

struct SuffixSampleSet {
  std::vector<std::uint64_t> suffixes;
  Provenance provenance = Provenance::Generated;
};

/// Normalised Shannon entropy of each nybble of the suffix, most significant
/// nybble (address bits 65-68) first. Each value lies in [0, 1].
struct EntropyReport {
  std::array<double, 16> nybbles{};
  std::size_t samples = 0;
};

/// Throws DomainError on an empty sample set.
EntropyReport nybble_entropy(std::span<const std::uint64_t> suffixes);

/// x from address bits 97-128, y from bits 65-96, each scaled by 2^-32.
struct ScatterPoint {
  double x = 0.0;
  double y = 0.0;
};

std::vector<ScatterPoint> scatter_points(std::span<const std::uint64_t> suffixes);

/// Expected time to hit one of p_salts live addresses in a suffix of
/// suffix_bits, at a rate of 2^32 probes per 45 minutes:
///   3 * 2^(N - 32) / (4 P)
/// The result is in the formula's own (unstated) unit. Throws DomainError
/// for non-positive inputs.
double expected_scan_time(int suffix_bits, std::uint64_t p_salts);

inline constexpr double kSafeMarginBits = 46.0;

struct SecurityMargin {
  double margin = 0.0;  ///< suffix_bits - log2(P)
  bool safe = false;    ///< margin >= 46
};

SecurityMargin security_margin(int suffix_bits, std::uint64_t p_salts);

struct UniformityResult {
  double statistic = 0.0;
  double critical_value = 0.0;
  int degrees_of_freedom = 0;
  double alpha = 0.0;
  bool pass = false;
};

/// Pearson chi-square of the scatter points binned on a grid x grid lattice
/// against the uniform expectation. Needs at least 10 samples per cell;
/// throws DomainError otherwise.
UniformityResult grid_uniformity(std::span<const std::uint64_t> suffixes, int grid = 16, double alpha = 0.001);

/// One 16-digit hex suffix per line; blank lines and '#' comments are skipped.
/// Throws ParseError with the offending line number.
std::vector<std::uint64_t> read_suffix_list(std::istream& in);

}  // namespace addrless::analysis

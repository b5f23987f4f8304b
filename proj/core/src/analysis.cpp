#include "addrless/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

#include "addrless/errors.hpp"

namespace addrless::analysis {

std::string_view provenance_name(Provenance p) noexcept {
  return p == Provenance::Generated ? "generated" : "collected";
}

EntropyReport nybble_entropy(std::span<const std::uint64_t> suffixes) {
  if (suffixes.empty()) throw DomainError("entropy of an empty sample set");
  std::array<std::array<std::uint64_t, 16>, 16> counts{};
  for (std::uint64_t s : suffixes) {
    for (int k = 0; k < 16; ++k) ++counts[k][(s >> (60 - 4 * k)) & 0xF];
  }
  EntropyReport report;
  report.samples = suffixes.size();
  const double n = static_cast<double>(suffixes.size());
  for (int k = 0; k < 16; ++k) {
    double h = 0.0;
    for (std::uint64_t c : counts[k]) {
      if (c == 0) continue;
      const double p = static_cast<double>(c) / n;
      h -= p * std::log2(p);
    }
    // log2(16) = 4 normalises to [0, 1]; clamp away rounding dust.
    report.nybbles[k] = std::clamp(h / 4.0, 0.0, 1.0);
  }
  return report;
}

std::vector<ScatterPoint> scatter_points(std::span<const std::uint64_t> suffixes) {
  std::vector<ScatterPoint> points;
  points.reserve(suffixes.size());
  for (std::uint64_t s : suffixes) {
    points.push_back({std::ldexp(static_cast<double>(s & 0xFFFFFFFFULL), -32),
                      std::ldexp(static_cast<double>(s >> 32), -32)});
  }
  return points;
}

double expected_scan_time(int suffix_bits, std::uint64_t p_salts) {
  if (suffix_bits < 1 || p_salts < 1) throw DomainError("suffix_bits and p_salts must be positive");
  return 3.0 * std::ldexp(1.0, suffix_bits - 32) / (4.0 * static_cast<double>(p_salts));
}

SecurityMargin security_margin(int suffix_bits, std::uint64_t p_salts) {
  if (suffix_bits < 1 || p_salts < 1) throw DomainError("suffix_bits and p_salts must be positive");
  const double margin = suffix_bits - std::log2(static_cast<double>(p_salts));
  return {margin, margin >= kSafeMarginBits};
}

UniformityResult grid_uniformity(std::span<const std::uint64_t> suffixes, int grid, double alpha) {
  if (grid < 2) throw DomainError("grid must have at least 2 cells per side");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  const std::size_t cells = static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid);
  if (suffixes.size() < 10 * cells) {
    throw DomainError("grid_uniformity needs at least " + std::to_string(10 * cells) + " samples, got " +
                      std::to_string(suffixes.size()));
  }
  std::vector<std::uint64_t> counts(cells, 0);
  for (const auto& pt : scatter_points(suffixes)) {
    const auto col = std::min(static_cast<std::size_t>(pt.x * grid), static_cast<std::size_t>(grid - 1));
    const auto row = std::min(static_cast<std::size_t>(pt.y * grid), static_cast<std::size_t>(grid - 1));
    ++counts[row * grid + col];
  }
  const double expected = static_cast<double>(suffixes.size()) / static_cast<double>(cells);
  double stat = 0.0;
  for (std::uint64_t c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  UniformityResult r;
  r.statistic = stat;
  r.degrees_of_freedom = static_cast<int>(cells) - 1;
  r.alpha = alpha;
  r.critical_value = boost::math::quantile(
      boost::math::complement(boost::math::chi_squared(static_cast<double>(r.degrees_of_freedom)), alpha));
  r.pass = stat < r.critical_value;
  return r;
}

std::vector<std::uint64_t> read_suffix_list(std::istream& in) {
  std::vector<std::uint64_t> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    std::string_view digits(line.data() + first, last - first + 1);
    if (digits.starts_with("0x") || digits.starts_with("0X")) digits.remove_prefix(2);
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value, 16);
    if (digits.size() != 16 || ec != std::errc{} || ptr != digits.data() + digits.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected a 16-digit hex suffix");
    }
    out.push_back(value);
  }
  return out;
}

}  // namespace addrless::analysis

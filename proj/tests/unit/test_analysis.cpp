#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "addrless/analysis.hpp"
#include "addrless/errors.hpp"
#include "oracle_vectors.hpp"

using namespace addrless;
using namespace addrless::analysis;

TEST(Entropy, IdenticalSamplesAreZero) {
  const std::vector<std::uint64_t> s(100, 0x0123456789ABCDEFULL);
  const auto r = nybble_entropy(s);
  EXPECT_EQ(r.samples, 100U);
  for (double e : r.nybbles) EXPECT_EQ(e, 0.0);
}

TEST(Entropy, AllSixteenValuesGiveOne) {
  std::vector<std::uint64_t> s;
  for (std::uint64_t v = 0; v < 16; ++v) s.push_back(v << 60 | v);
  const auto r = nybble_entropy(s);
  EXPECT_DOUBLE_EQ(r.nybbles[0], 1.0);
  EXPECT_DOUBLE_EQ(r.nybbles[15], 1.0);
  EXPECT_EQ(r.nybbles[7], 0.0);
}

TEST(Entropy, ThreeToOne) {
  const std::vector<std::uint64_t> s{0, 0, 0, 1};
  EXPECT_NEAR(nybble_entropy(s).nybbles[15], oracle::kEntropyThreeOne, 1e-12);
}

TEST(Entropy, EmptyThrows) { EXPECT_THROW(nybble_entropy(std::vector<std::uint64_t>{}), DomainError); }

TEST(Entropy, BoundsAndZeroIffConstant) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint64_t> s(1 + rng() % 50);
    const std::uint64_t mask = rng();
    for (auto& v : s) v = rng() & mask;
    const auto r = nybble_entropy(s);
    for (int k = 0; k < 16; ++k) {
      ASSERT_GE(r.nybbles[k], 0.0);
      ASSERT_LE(r.nybbles[k], 1.0 + 1e-12);
      const int shift = 60 - 4 * k;
      const bool constant = std::all_of(s.begin(), s.end(), [&](auto v) { return ((v >> shift) & 0xF) == ((s[0] >> shift) & 0xF); });
      ASSERT_EQ(r.nybbles[k] == 0.0, constant);
    }
  }
}

TEST(Entropy, PermutationInvariant) {
  std::mt19937_64 rng(9);
  std::vector<std::uint64_t> s(5000);
  for (auto& v : s) v = rng() & 0x0F0F00FFFFFF0F0FULL;
  const auto a = nybble_entropy(s);
  std::shuffle(s.begin(), s.end(), rng);
  const auto b = nybble_entropy(s);
  for (int k = 0; k < 16; ++k) EXPECT_NEAR(a.nybbles[k], b.nybbles[k], 1e-12);
}

TEST(Scatter, Examples) {
  const std::vector<std::uint64_t> s{0, 0xFFFFFFFF00000000ULL, 0x8000000080000000ULL};
  const auto p = scatter_points(s);
  ASSERT_EQ(p.size(), 3U);
  EXPECT_EQ(p[0].x, 0.0);
  EXPECT_EQ(p[0].y, 0.0);
  EXPECT_EQ(p[1].x, 0.0);
  EXPECT_DOUBLE_EQ(p[1].y, 4294967295.0 / 4294967296.0);
  EXPECT_DOUBLE_EQ(p[2].x, 0.5);
  EXPECT_DOUBLE_EQ(p[2].y, 0.5);
}

TEST(Scatter, RangesAndOrder) {
  std::mt19937_64 rng(1);
  std::vector<std::uint64_t> s(1000);
  for (auto& v : s) v = rng();
  s.push_back(~0ULL);
  const auto p = scatter_points(s);
  ASSERT_EQ(p.size(), s.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    ASSERT_GE(p[i].x, 0.0);
    ASSERT_LT(p[i].x, 1.0);
    ASSERT_GE(p[i].y, 0.0);
    ASSERT_LT(p[i].y, 1.0);
    ASSERT_DOUBLE_EQ(p[i].x, static_cast<double>(s[i] & 0xFFFFFFFFULL) / 4294967296.0);
  }
}

TEST(ScanTime, Examples) {
  EXPECT_DOUBLE_EQ(expected_scan_time(32, 1), 0.75);
  EXPECT_NEAR(expected_scan_time(64, 10'000), oracle::kScanTime64P1e4, 1e-6);
  EXPECT_DOUBLE_EQ(expected_scan_time(46, 1), 12288.0);
  EXPECT_THROW(expected_scan_time(0, 1), DomainError);
  EXPECT_THROW(expected_scan_time(64, 0), DomainError);
}

TEST(Margin, Examples) {
  const auto a = security_margin(64, 1);
  EXPECT_DOUBLE_EQ(a.margin, 64.0);
  EXPECT_TRUE(a.safe);
  const auto b = security_margin(64, 10'000);
  EXPECT_NEAR(b.margin, oracle::kMargin64P1e4, 1e-9);
  EXPECT_TRUE(b.safe);
  const auto c = security_margin(50, 10'000);
  EXPECT_NEAR(c.margin, oracle::kMargin50P1e4, 1e-9);
  EXPECT_FALSE(c.safe);
  EXPECT_TRUE(security_margin(46, 1).safe);
  EXPECT_THROW(security_margin(-1, 1), DomainError);
}

// safe(N, P) <=> T(N, P) >= T(46, 1)
TEST(Margin, ConsistentWithScanTime) {
  const double floor_time = expected_scan_time(46, 1);
  for (int n = 33; n <= 70; ++n) {
    for (std::uint64_t p : {1ULL, 10ULL, 10'000ULL}) {
      EXPECT_EQ(security_margin(n, p).safe, expected_scan_time(n, p) >= floor_time) << n << " " << p;
    }
  }
}

TEST(Uniformity, EqualCountsPass) {
  std::vector<std::uint64_t> s;
  for (std::uint64_t cx = 0; cx < 16; ++cx) {
    for (std::uint64_t cy = 0; cy < 16; ++cy) {
      for (int k = 0; k < 10; ++k) s.push_back((cy << 60) | (cx << 28));
    }
  }
  const auto r = grid_uniformity(s);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.degrees_of_freedom, 255);
  EXPECT_TRUE(r.pass);
}

TEST(Uniformity, OneCellFails) {
  const std::vector<std::uint64_t> s(2560, 0);
  const auto r = grid_uniformity(s);
  EXPECT_DOUBLE_EQ(r.statistic, oracle::kChiOneCell2560);
  EXPECT_DOUBLE_EQ(r.statistic, 255.0 * 10 + (2560.0 - 10) * (2560.0 - 10) / 10);
  EXPECT_FALSE(r.pass);
}

TEST(Uniformity, SeededUniformSourcePasses) {
  std::mt19937_64 rng(12345);
  std::vector<std::uint64_t> s(100'000);
  for (auto& v : s) v = rng();
  const auto r = grid_uniformity(s, 16, 0.001);
  EXPECT_TRUE(r.pass) << r.statistic << " vs " << r.critical_value;
  // Upper 0.1% point of chi-square with 255 degrees of freedom.
  EXPECT_NEAR(r.critical_value, 330.52, 0.01);
}

TEST(Uniformity, UndersampledThrows) {
  EXPECT_THROW(grid_uniformity(std::vector<std::uint64_t>(2559, 0)), DomainError);
}

TEST(Uniformity, PermutationInvariant) {
  std::mt19937_64 rng(4);
  std::vector<std::uint64_t> s(5000);
  for (auto& v : s) v = rng() & 0xF0F0F0F0F0F0F0F0ULL;
  const auto a = grid_uniformity(s, 4);
  std::shuffle(s.begin(), s.end(), rng);
  EXPECT_DOUBLE_EQ(a.statistic, grid_uniformity(s, 4).statistic);
}

TEST(SuffixList, ParsesHexLines) {
  std::istringstream in("# comment\n0123456789abcdef\n\n0xFFFFFFFFFFFFFFFF\n  0000000000000001  \n");
  EXPECT_EQ(read_suffix_list(in), (std::vector<std::uint64_t>{0x0123456789ABCDEFULL, ~0ULL, 1}));
}

TEST(SuffixList, RejectsBadLines) {
  std::istringstream short_line("abc\n");
  EXPECT_THROW(read_suffix_list(short_line), ParseError);
  std::istringstream bad_digit("0123456789abcdeg\n");
  EXPECT_THROW(read_suffix_list(bad_digit), ParseError);
}

TEST(Provenance, Names) {
  EXPECT_EQ(provenance_name(Provenance::Generated), "generated");
  EXPECT_EQ(provenance_name(Provenance::Collected), "collected");
}

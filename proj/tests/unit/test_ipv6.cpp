#include <gtest/gtest.h>

#include <random>

#include "addrless/errors.hpp"
#include "addrless/ipv6.hpp"

using namespace addrless;

TEST(Ipv6Address, ParsesAndPrintsCanonicalForm) {
  const auto a = Ipv6Address::from_string("2001:0db8:0000:0000:0000:0000:0000:000a");
  EXPECT_EQ(a.to_string(), "2001:db8::a");
  EXPECT_EQ(a.high(), 0x20010DB800000000ULL);
  EXPECT_EQ(a.low(), 0xAULL);
  EXPECT_EQ(Ipv6Address{}.to_string(), "::");
}

TEST(Ipv6Address, RejectsMalformedText) {
  EXPECT_FALSE(Ipv6Address::parse("2001:db8::g").has_value());
  EXPECT_FALSE(Ipv6Address::parse("10.0.0.1").has_value());
  EXPECT_FALSE(Ipv6Address::parse("").has_value());
  EXPECT_THROW(Ipv6Address::from_string("1:2:3"), ParseError);
}

TEST(Ipv6Address, TextRoundTripProperty) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10'000; ++i) {
    // Sparse values exercise the :: compression paths.
    const std::uint64_t hi = (i % 3 == 0) ? rng() & 0xFFFF0000FFFF0000ULL : rng();
    const std::uint64_t lo = (i % 5 == 0) ? rng() & 0x00000000FFFFULL : rng();
    const Ipv6Address a(hi, lo);
    EXPECT_EQ(Ipv6Address::from_string(a.to_string()), a);
    EXPECT_EQ(Ipv6Address::from_bytes(a.to_bytes()), a);
  }
}

TEST(Ipv6Address, BytesAreNetworkOrder) {
  const auto b = Ipv6Address::from_string("2001:db8::1").to_bytes();
  EXPECT_EQ(b[0], 0x20);
  EXPECT_EQ(b[1], 0x01);
  EXPECT_EQ(b[15], 0x01);
}

TEST(RoutingPrefix, ParseAndContains) {
  const auto p = RoutingPrefix::parse("2001:da8::/64");
  EXPECT_EQ(p.length(), 64);
  EXPECT_TRUE(p.contains(Ipv6Address::from_string("2001:da8::dead:beef")));
  EXPECT_FALSE(p.contains(Ipv6Address::from_string("2001:da8:0:1::1")));
  EXPECT_EQ(p.to_string(), "2001:da8::/64");
}

TEST(RoutingPrefix, RejectsHostBitsAndBadLengths) {
  EXPECT_THROW(RoutingPrefix::parse("2001:da8::1/64"), ParseError);
  EXPECT_THROW(RoutingPrefix::parse("2001:da8::/129"), ParseError);
  EXPECT_THROW(RoutingPrefix::parse("2001:da8::/-1"), ParseError);
  EXPECT_THROW(RoutingPrefix::parse("2001:da8::"), ParseError);
}

TEST(RoutingPrefix, SubPrefixContainment) {
  const auto p64 = RoutingPrefix::parse("2001:da8::/64");
  const auto p66 = RoutingPrefix::parse("2001:da8::4000:0:0:0/66");
  EXPECT_TRUE(p64.contains(p66));
  EXPECT_FALSE(p66.contains(p64));
  EXPECT_EQ(RoutingPrefix::containing(Ipv6Address::from_string("2001:da8::7fff:1:2:3"), 66), p66);
}

TEST(RoutingPrefix, WithSuffixAndSubnets) {
  const auto p48 = RoutingPrefix::parse("2001:da8::/48");
  EXPECT_EQ(p48.subnet64(3).to_string(), "2001:da8:0:3::/64");
  const auto p = RoutingPrefix::parse("2001:da8::/64");
  EXPECT_EQ(p.with_suffix(0x1122334455667788ULL).to_string(), "2001:da8::1122:3344:5566:7788");
}

TEST(PrefixMask, Edges) {
  EXPECT_EQ(prefix_mask(0), Ipv6Address(0, 0));
  EXPECT_EQ(prefix_mask(64), Ipv6Address(~0ULL, 0));
  EXPECT_EQ(prefix_mask(128), Ipv6Address(~0ULL, ~0ULL));
  EXPECT_EQ(prefix_mask(65), Ipv6Address(~0ULL, 0x8000000000000000ULL));
}

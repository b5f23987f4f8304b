#include <gtest/gtest.h>

#include <map>
#include <thread>
#include <vector>

#include "addrless/entrance.hpp"
#include "addrless/errors.hpp"
#include "oracle_vectors.hpp"

using namespace addrless;

namespace {

const CipherKey kKey = CipherKey::from_u64(0x0123456789ABCDEFULL);
const SaltParams kParams{oracle::kFullT0, oracle::kFullStep, VerifyWindow::symmetric(10'000)};
const Ipv6Address kClient = Ipv6Address::from_string("2001:db8::a");

std::vector<RoutingPrefix> prefixes(int n) {
  std::vector<RoutingPrefix> out;
  for (int i = 0; i < n; ++i) out.push_back(RoutingPrefix::parse("2001:da8::/48").subnet64(static_cast<std::uint64_t>(i + 1)));
  return out;
}

Entrance make_entrance(LbKind kind = LbKind::Static, int n = 1, AuthConfig auth = {}) {
  if (kind == LbKind::Static) {
    return Entrance(AddressCodec(CipherKind::ReferenceDes, kKey, kParams),
                    LbStrategy(kind, {RoutingPrefix::parse("2001:da8::/64")}), 8081, std::move(auth));
  }
  return Entrance(AddressCodec(CipherKind::ReferenceDes, kKey, kParams), LbStrategy(kind, prefixes(n)), 8081,
                  std::move(auth));
}

}  // namespace

TEST(LbStrategy, StaticReturnsItsPrefix) {
  LbStrategy lb(LbKind::Static, prefixes(1));
  for (int i = 0; i < 5; ++i) EXPECT_EQ(lb.select(), prefixes(1)[0]);
}

TEST(LbStrategy, RoundRobinCycles) {
  LbStrategy lb(LbKind::RoundRobin, prefixes(3));
  const auto p = prefixes(3);
  EXPECT_EQ(lb.select(), p[0]);
  EXPECT_EQ(lb.select(), p[1]);
  EXPECT_EQ(lb.select(), p[2]);
  EXPECT_EQ(lb.select(), p[0]);
}

TEST(LbStrategy, LeastConnectionsPicksMinimumLowestIndexOnTies) {
  LbStrategy lb(LbKind::LeastConnections, prefixes(3));
  lb.set_live_connections(0, 5);
  lb.set_live_connections(1, 2);
  lb.set_live_connections(2, 2);
  EXPECT_EQ(lb.select_index(), 1U);
  lb.connection_opened(1);
  EXPECT_EQ(lb.select_index(), 2U);
  lb.connection_closed(0);
  lb.connection_closed(0);
  lb.connection_closed(0);
  lb.connection_closed(0);
  EXPECT_EQ(lb.live_connections(0), 1);
  EXPECT_EQ(lb.select_index(), 0U);
}

TEST(LbStrategy, LeastConnectionsWithoutFeedbackIsRoundRobin) {
  LbStrategy lb(LbKind::LeastConnections, prefixes(2), false);
  EXPECT_EQ(lb.effective_kind(), LbKind::RoundRobin);
  EXPECT_EQ(lb.select_index(), 0U);
  EXPECT_EQ(lb.select_index(), 1U);
  EXPECT_EQ(lb.select_index(), 0U);
}

TEST(LbStrategy, PrefixCountAndLengthRules) {
  EXPECT_THROW(LbStrategy(LbKind::Static, prefixes(2)), DomainError);
  EXPECT_THROW(LbStrategy(LbKind::RoundRobin, prefixes(1)), DomainError);
  EXPECT_THROW(LbStrategy(LbKind::LeastConnections, {}), DomainError);
  EXPECT_THROW(LbStrategy(LbKind::Static, {RoutingPrefix::parse("2001:da8::/48")}), PrefixLengthError);
}

TEST(LbStrategy, NamesRoundTrip) {
  for (auto k : {LbKind::Static, LbKind::RoundRobin, LbKind::LeastConnections}) {
    EXPECT_EQ(parse_lb_kind(lb_kind_name(k)), k);
  }
  EXPECT_THROW(parse_lb_kind("random"), ParseError);
}

TEST(LbStrategy, RoundRobinFairness) {
  for (int k = 2; k <= 5; ++k) {
    LbStrategy lb(LbKind::RoundRobin, prefixes(k));
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    const int n = 37;
    for (int i = 0; i < n * k; ++i) ++counts[lb.select_index()];
    for (int c : counts) EXPECT_EQ(c, n);
  }
}

TEST(LbStrategy, RoundRobinFairUnderConcurrency) {
  LbStrategy lb(LbKind::RoundRobin, prefixes(4));
  std::vector<std::vector<int>> per_thread(8, std::vector<int>(4, 0));
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 10'000; ++i) ++per_thread[static_cast<std::size_t>(t)][lb.select_index()];
    });
  }
  for (auto& th : threads) th.join();
  for (std::size_t p = 0; p < 4; ++p) {
    int total = 0;
    for (const auto& v : per_thread) total += v[p];
    EXPECT_EQ(total, 20'000);
  }
}

TEST(AuthGate, Modes) {
  EXPECT_EQ(auth_gate(std::nullopt, AuthConfig{}), AuthResult::Pass);
  const AuthConfig tokens{AuthConfig::Mode::TokenList, {"abc"}};
  EXPECT_EQ(auth_gate(std::string("abc"), tokens), AuthResult::Pass);
  EXPECT_EQ(auth_gate(std::string("abd"), tokens), AuthResult::Deny);
  EXPECT_EQ(auth_gate(std::string("ab"), tokens), AuthResult::Deny);
  EXPECT_EQ(auth_gate(std::nullopt, tokens), AuthResult::Deny);
}

TEST(Entrance, RedirectMatchesGeneratedAddress) {
  auto entrance = make_entrance();
  RequestMeta req{kClient, "/index.html", "", std::nullopt};
  const auto resp = entrance.handle_request(req, oracle::kFullNow);
  const auto* r = std::get_if<RedirectDecision>(&resp);
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(r->status, 307);
  EXPECT_EQ(r->port, 8081);
  EXPECT_EQ(r->target.to_string(), oracle::kFullAddress);
  EXPECT_EQ(r->location, std::string("http://[") + oracle::kFullAddress + "]:8081/index.html");
}

TEST(Entrance, QueryPreserved) {
  auto entrance = make_entrance();
  const auto resp = entrance.handle_request({kClient, "/a/b", "x=1&y=%20", std::nullopt}, oracle::kFullNow);
  EXPECT_EQ(std::get<RedirectDecision>(resp).location,
            std::string("http://[") + oracle::kFullAddress + "]:8081/a/b?x=1&y=%20");
}

TEST(Entrance, RequestsOneSecondApartDiffer) {
  auto entrance = make_entrance();
  const auto a = std::get<RedirectDecision>(entrance.handle_request({kClient, "/", "", std::nullopt}, oracle::kFullNow));
  const auto b =
      std::get<RedirectDecision>(entrance.handle_request({kClient, "/", "", std::nullopt}, oracle::kFullNow + 1000));
  EXPECT_NE(a.location, b.location);
}

TEST(Entrance, DenyCarriesNoAddress) {
  auto entrance = make_entrance(LbKind::Static, 1, AuthConfig{AuthConfig::Mode::TokenList, {"secret"}});
  const auto denied = entrance.handle_request({kClient, "/", "", std::string("wrong")}, oracle::kFullNow);
  ASSERT_TRUE(std::holds_alternative<Deny>(denied));
  EXPECT_EQ(std::get<Deny>(denied).status, 403);
  const auto ok = entrance.handle_request({kClient, "/", "", std::string("secret")}, oracle::kFullNow);
  EXPECT_TRUE(std::holds_alternative<RedirectDecision>(ok));
}

TEST(Entrance, StatelessAcrossInstances) {
  auto a = make_entrance();
  auto b = make_entrance();
  for (TimeMs t = oracle::kFullNow; t < oracle::kFullNow + 500; t += 13) {
    RequestMeta req{Ipv6Address(0x20010DB800000000ULL, static_cast<std::uint64_t>(t)), "/", "", std::nullopt};
    EXPECT_EQ(std::get<RedirectDecision>(a.handle_request(req, t)).location,
              std::get<RedirectDecision>(b.handle_request(req, t)).location);
  }
}

TEST(Entrance, RoundRobinSpreadsPrefixes) {
  auto entrance = make_entrance(LbKind::RoundRobin, 3);
  std::map<std::size_t, int> seen;
  for (int i = 0; i < 9; ++i) {
    const auto r = std::get<RedirectDecision>(entrance.handle_request({kClient, "/", "", std::nullopt}, oracle::kFullNow));
    ++seen[r.prefix_index];
    EXPECT_TRUE(entrance.strategy().prefixes()[r.prefix_index].contains(r.target));
  }
  EXPECT_EQ(seen.size(), 3U);
  for (const auto& [_, c] : seen) EXPECT_EQ(c, 3);
}

TEST(FormatLocation, Shapes) {
  const auto a = Ipv6Address::from_string("2001:da8::1");
  EXPECT_EQ(format_location(a, 80, "/", ""), "http://[2001:da8::1]:80/");
  EXPECT_EQ(format_location(a, 8081, "/p", "q=1"), "http://[2001:da8::1]:8081/p?q=1");
  EXPECT_EQ(format_location(a, 8081, "", ""), "http://[2001:da8::1]:8081/");
}

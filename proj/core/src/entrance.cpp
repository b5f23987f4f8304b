#include "addrless/entrance.hpp"

#include <algorithm>
#include <limits>

#include "addrless/errors.hpp"

namespace addrless {

std::string_view lb_kind_name(LbKind kind) noexcept {
  switch (kind) {
    case LbKind::Static:
      return "static";
    case LbKind::RoundRobin:
      return "round-robin";
    case LbKind::LeastConnections:
      return "least-connections";
  }
  return "unknown";
}

LbKind parse_lb_kind(std::string_view name) {
  if (name == "static") return LbKind::Static;
  if (name == "round-robin") return LbKind::RoundRobin;
  if (name == "least-connections") return LbKind::LeastConnections;
  throw ParseError("unknown load-balancing strategy '" + std::string(name) + "'");
}

LbStrategy::LbStrategy(LbKind kind, std::vector<RoutingPrefix> prefixes, bool load_feedback)
    : kind_(kind), load_feedback_(load_feedback), prefixes_(std::move(prefixes)) {
  if (kind_ == LbKind::Static && prefixes_.size() != 1) {
    throw DomainError("static load balancing takes exactly one prefix");
  }
  if (kind_ != LbKind::Static && prefixes_.size() < 2) {
    throw DomainError(std::string(lb_kind_name(kind_)) + " needs at least two prefixes");
  }
  for (const auto& p : prefixes_) {
    if (p.length() != 64) throw PrefixLengthError("entrance prefixes must be /64, got " + p.to_string());
  }
  live_ = std::make_unique<std::atomic<std::int64_t>[]>(prefixes_.size());
}

LbStrategy::LbStrategy(LbStrategy&& other) noexcept
    : kind_(other.kind_),
      load_feedback_(other.load_feedback_),
      prefixes_(std::move(other.prefixes_)),
      live_(std::move(other.live_)),
      next_(other.next_.load()) {}

LbStrategy& LbStrategy::operator=(LbStrategy&& other) noexcept {
  kind_ = other.kind_;
  load_feedback_ = other.load_feedback_;
  prefixes_ = std::move(other.prefixes_);
  live_ = std::move(other.live_);
  next_.store(other.next_.load());
  return *this;
}

LbStrategy::~LbStrategy() = default;

LbKind LbStrategy::effective_kind() const noexcept {
  if (kind_ == LbKind::LeastConnections && !load_feedback_) return LbKind::RoundRobin;
  return kind_;
}

std::size_t LbStrategy::select_index() noexcept {
  switch (effective_kind()) {
    case LbKind::Static:
      return 0;
    case LbKind::RoundRobin:
      return static_cast<std::size_t>(next_.fetch_add(1, std::memory_order_relaxed) % prefixes_.size());
    case LbKind::LeastConnections: {
      std::size_t best = 0;
      std::int64_t best_count = std::numeric_limits<std::int64_t>::max();
      for (std::size_t i = 0; i < prefixes_.size(); ++i) {
        const auto c = live_[i].load(std::memory_order_relaxed);
        if (c < best_count) {
          best = i;
          best_count = c;
        }
      }
      return best;
    }
  }
  return 0;
}

void LbStrategy::connection_opened(std::size_t index) noexcept {
  if (index < prefixes_.size()) live_[index].fetch_add(1, std::memory_order_relaxed);
}

void LbStrategy::connection_closed(std::size_t index) noexcept {
  if (index < prefixes_.size()) live_[index].fetch_sub(1, std::memory_order_relaxed);
}

void LbStrategy::set_live_connections(std::size_t index, std::int64_t count) noexcept {
  if (index < prefixes_.size()) live_[index].store(count, std::memory_order_relaxed);
}

std::int64_t LbStrategy::live_connections(std::size_t index) const noexcept {
  return index < prefixes_.size() ? live_[index].load(std::memory_order_relaxed) : 0;
}

namespace {

bool constant_time_equal(std::string_view a, std::string_view b) noexcept {
  const std::size_t n = std::max(a.size(), b.size());
  unsigned diff = static_cast<unsigned>(a.size() ^ b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = i < a.size() ? static_cast<unsigned char>(a[i]) : 0U;
    const auto y = i < b.size() ? static_cast<unsigned char>(b[i]) : 0U;
    diff |= x ^ y;
  }
  return diff == 0;
}

}  // namespace

AuthResult auth_gate(const std::optional<std::string>& credential, const AuthConfig& config) {
  if (config.mode == AuthConfig::Mode::Off) return AuthResult::Pass;
  if (!credential) return AuthResult::Deny;
  bool match = false;
  for (const auto& token : config.tokens) {
    // No early exit: every token is compared.
    match |= constant_time_equal(*credential, token);
  }
  return match ? AuthResult::Pass : AuthResult::Deny;
}

std::string format_location(const Ipv6Address& target, std::uint16_t port, std::string_view path,
                            std::string_view query) {
  std::string loc = "http://[" + target.to_string() + "]:" + std::to_string(port);
  if (path.empty() || path.front() != '/') loc += '/';
  loc += path;
  if (!query.empty()) {
    loc += '?';
    loc += query;
  }
  return loc;
}

Entrance::Entrance(AddressCodec codec, LbStrategy strategy, std::uint16_t service_port, AuthConfig auth)
    : codec_(std::move(codec)),
      strategy_(std::move(strategy)),
      service_port_(service_port),
      auth_(std::move(auth)) {}

EntranceResponse Entrance::handle_request(const RequestMeta& request, TimeMs now_ms) {
  if (auth_gate(request.credential, auth_) == AuthResult::Deny) return Deny{};

  RedirectDecision decision;
  decision.prefix_index = strategy_.select_index();
  decision.target = codec_.generate(request.client, strategy_.prefixes()[decision.prefix_index], now_ms);
  decision.port = service_port_;
  decision.location = format_location(decision.target, service_port_, request.path, request.query);
  return decision;
}

}  // namespace addrless

#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "addrless/codec.hpp"
#include "addrless/ipv6.hpp"

namespace addrless {

enum class LbKind { Static, RoundRobin, LeastConnections };

std::string_view lb_kind_name(LbKind kind) noexcept;
/// "static", "round-robin" or "least-connections". Throws ParseError.
LbKind parse_lb_kind(std::string_view name);

/// Chooses the destination /64 for each redirect.
///
/// Least-connections relies on connection_opened()/connection_closed()
/// notifications. Without a feedback channel (load_feedback = false) it
/// falls back to round-robin. Counters are advisory and updated atomically.
class LbStrategy {
 public:
  /// Static takes exactly one prefix, the others at least two; every prefix
  /// must be a /64. Throws DomainError / PrefixLengthError otherwise.
  LbStrategy(LbKind kind, std::vector<RoutingPrefix> prefixes, bool load_feedback = true);

  LbStrategy(LbStrategy&&) noexcept;
  LbStrategy& operator=(LbStrategy&&) noexcept;
  ~LbStrategy();

  std::size_t select_index() noexcept;
  const RoutingPrefix& select() noexcept { return prefixes_[select_index()]; }

  void connection_opened(std::size_t index) noexcept;
  void connection_closed(std::size_t index) noexcept;
  void set_live_connections(std::size_t index, std::int64_t count) noexcept;
  std::int64_t live_connections(std::size_t index) const noexcept;

  LbKind kind() const noexcept { return kind_; }
  /// The policy actually applied (least-connections degrades without feedback).
  LbKind effective_kind() const noexcept;
  const std::vector<RoutingPrefix>& prefixes() const noexcept { return prefixes_; }

 private:
  LbKind kind_;
  bool load_feedback_;
  std::vector<RoutingPrefix> prefixes_;
  std::unique_ptr<std::atomic<std::int64_t>[]> live_;
  std::atomic<std::uint64_t> next_{0};
};

struct AuthConfig {
  enum class Mode { Off, TokenList };

  Mode mode = Mode::Off;
  std::vector<std::string> tokens;
};

enum class AuthResult { Pass, Deny };

/// Token comparison takes time independent of where the strings differ.
AuthResult auth_gate(const std::optional<std::string>& credential, const AuthConfig& config);

struct RequestMeta {
  Ipv6Address client;
  std::string path = "/";
  std::string query;
  std::optional<std::string> credential;
};

struct RedirectDecision {
  Ipv6Address target;
  std::uint16_t port = 0;
  int status = 307;
  std::string location;
  std::size_t prefix_index = 0;
};

struct Deny {
  int status = 403;
};

using EntranceResponse = std::variant<RedirectDecision, Deny>;

/// "http://[addr]:port/path?query"; the '?' is omitted for an empty query.
std::string format_location(const Ipv6Address& target, std::uint16_t port, std::string_view path,
                            std::string_view query);

/// The fixed-address front door. Never serves content: every request gets a
/// redirect to a freshly generated address or a denial.
class Entrance {
 public:
  Entrance(AddressCodec codec, LbStrategy strategy, std::uint16_t service_port, AuthConfig auth = {});

  EntranceResponse handle_request(const RequestMeta& request, TimeMs now_ms);

  LbStrategy& strategy() noexcept { return strategy_; }
  const AddressCodec& codec() const noexcept { return codec_; }
  std::uint16_t service_port() const noexcept { return service_port_; }

 private:
  AddressCodec codec_;
  LbStrategy strategy_;
  std::uint16_t service_port_;
  AuthConfig auth_;
};

}  // namespace addrless

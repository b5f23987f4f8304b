#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "addrless/entrance.hpp"
#include "addrless/serve/clock.hpp"

namespace httplib {
class Server;
}

namespace addrless::serve {

struct EntranceServerOptions {
  std::string listen = "::";
  std::uint16_t port = 8080;  ///< 0 picks a free port
  Clock clock = wall_clock_ms;
  std::function<void(const std::string&)> log;
};

/// Bearer token from an Authorization header value, if present.
std::optional<std::string> bearer_credential(std::string_view authorization);

/// Client address as seen on the socket. Empty for IPv4 and IPv4-mapped
/// peers, which cannot be encoded into a destination address.
std::optional<Ipv6Address> client_address(std::string_view remote_addr);

/// HTTP/1.1 front end: every request is answered with 307 to a freshly
/// generated address, 403 on auth failure or 400 for non-IPv6 clients.
class EntranceServer {
 public:
  EntranceServer(std::shared_ptr<Entrance> entrance, EntranceServerOptions options);
  ~EntranceServer();

  EntranceServer(const EntranceServer&) = delete;
  EntranceServer& operator=(const EntranceServer&) = delete;

  /// Binds and starts serving on a background thread. Throws
  /// std::runtime_error if the address cannot be bound.
  void start();
  void stop();
  /// Blocks until stop() is called from elsewhere.
  void wait();

  std::uint16_t port() const noexcept { return port_; }

 private:
  std::shared_ptr<Entrance> entrance_;
  EntranceServerOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  std::uint16_t port_ = 0;
};

}  // namespace addrless::serve

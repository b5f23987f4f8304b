#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "addrless/gateway.hpp"
#include "addrless/serve/clock.hpp"

namespace addrless::serve {

struct GatewayServerOptions {
  std::string listen = "::";
  std::uint16_t port = 8081;  ///< 0 picks a free port
  Clock clock = wall_clock_ms;
  int workers = 4;
  int read_timeout_ms = 2000;
  int expire_interval_ms = 1000;
};

/// TCP front of the demo service. Each accepted connection is one flow: the
/// kernel-reported (peer, local) pair goes through Gateway::admit_packet.
/// Admitted flows get a small HTTP page; dropped flows are reset without a
/// single byte of payload.
///
/// One Gateway per /64; connections to addresses outside all of them drop.
class GatewayServer {
 public:
  GatewayServer(std::vector<std::shared_ptr<Gateway>> gateways, GatewayServerOptions options);
  ~GatewayServer();

  GatewayServer(const GatewayServer&) = delete;
  GatewayServer& operator=(const GatewayServer&) = delete;

  /// Throws std::system_error if the socket cannot be bound.
  void start();
  void stop();
  void wait();

  std::uint16_t port() const noexcept { return port_; }

 private:
  std::vector<std::shared_ptr<Gateway>> gateways_;
  GatewayServerOptions options_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;
  std::vector<std::thread> workers_;
  std::mutex queue_mu_;
  std::condition_variable queue_cv_;
  std::deque<int> queue_;

  void accept_loop();
  void worker_loop();
  void serve_connection(int fd);
  Gateway* gateway_for(const Ipv6Address& dst) const noexcept;
};

/// The demo page returned on admitted flows.
std::string demo_page(const FlowKey& key);

}  // namespace addrless::serve

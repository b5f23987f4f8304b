#include "addrless/serve/gateway_server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstring>
#include <string_view>
#include <system_error>

namespace addrless::serve {
namespace {

struct Endpoint {
  Ipv6Address addr;
  std::uint16_t port = 0;
};

Endpoint endpoint_of(const sockaddr_in6& sa) {
  std::array<std::uint8_t, 16> bytes{};
  std::memcpy(bytes.data(), &sa.sin6_addr, 16);
  return Endpoint{Ipv6Address::from_bytes(bytes), ntohs(sa.sin6_port)};
}

void reset_and_close(int fd) {
  linger lg{1, 0};
  setsockopt(fd, SOL_SOCKET, SO_LINGER, &lg, sizeof lg);
  close(fd);
}

void write_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      return;
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

// Reads until the end of the request head, a timeout, or 16 KiB.
void drain_request_head(int fd, int timeout_ms) {
  std::string head;
  std::array<char, 2048> buf{};
  while (head.size() < 16 * 1024 && head.find("\r\n\r\n") == std::string::npos) {
    pollfd p{fd, POLLIN, 0};
    if (poll(&p, 1, timeout_ms) <= 0) return;
    const ssize_t n = recv(fd, buf.data(), buf.size(), 0);
    if (n <= 0) return;
    head.append(buf.data(), static_cast<std::size_t>(n));
  }
}

}  // namespace

std::string demo_page(const FlowKey& key) {
  std::string body = "addrless demo service\n";
  body += "client: " + key.src.to_string() + "\n";
  body += "served-on: [" + key.dst.to_string() + "]:" + std::to_string(key.dst_port) + "\n";
  std::string out = "HTTP/1.1 200 OK\r\nContent-Type: text/plain\r\nConnection: close\r\n";
  out += "Content-Length: " + std::to_string(body.size()) + "\r\n\r\n";
  return out + body;
}

GatewayServer::GatewayServer(std::vector<std::shared_ptr<Gateway>> gateways, GatewayServerOptions options)
    : gateways_(std::move(gateways)), options_(std::move(options)) {}

GatewayServer::~GatewayServer() { stop(); }

void GatewayServer::start() {
  listen_fd_ = socket(AF_INET6, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (listen_fd_ < 0) throw std::system_error(errno, std::generic_category(), "gateway socket");
  const int one = 1;
  setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  setsockopt(listen_fd_, IPPROTO_IPV6, IPV6_V6ONLY, &one, sizeof one);

  sockaddr_in6 sa{};
  sa.sin6_family = AF_INET6;
  sa.sin6_port = htons(options_.port);
  if (inet_pton(AF_INET6, options_.listen.c_str(), &sa.sin6_addr) != 1) {
    close(listen_fd_);
    listen_fd_ = -1;
    throw std::system_error(EINVAL, std::generic_category(), "gateway listen address " + options_.listen);
  }
  if (bind(listen_fd_, reinterpret_cast<sockaddr*>(&sa), sizeof sa) < 0 || listen(listen_fd_, 128) < 0) {
    const int err = errno;
    close(listen_fd_);
    listen_fd_ = -1;
    throw std::system_error(err, std::generic_category(), "gateway bind");
  }
  socklen_t len = sizeof sa;
  getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&sa), &len);
  port_ = ntohs(sa.sin6_port);

  stopping_ = false;
  for (int i = 0; i < std::max(options_.workers, 1); ++i) workers_.emplace_back([this] { worker_loop(); });
  acceptor_ = std::thread([this] { accept_loop(); });
}

void GatewayServer::stop() {
  stopping_ = true;
  queue_cv_.notify_all();
  if (acceptor_.joinable()) acceptor_.join();
  for (auto& w : workers_) {
    if (w.joinable()) w.join();
  }
  workers_.clear();
  if (listen_fd_ >= 0) {
    close(listen_fd_);
    listen_fd_ = -1;
  }
  std::lock_guard lock(queue_mu_);
  for (int fd : queue_) reset_and_close(fd);
  queue_.clear();
}

void GatewayServer::wait() {
  if (acceptor_.joinable()) acceptor_.join();
}

Gateway* GatewayServer::gateway_for(const Ipv6Address& dst) const noexcept {
  for (const auto& g : gateways_) {
    if (g->config().prefix.contains(dst)) return g.get();
  }
  return nullptr;
}

void GatewayServer::accept_loop() {
  TimeMs next_expire = options_.clock() + options_.expire_interval_ms;
  while (!stopping_) {
    pollfd p{listen_fd_, POLLIN, 0};
    const int ready = poll(&p, 1, 200);
    const TimeMs now = options_.clock();
    if (now >= next_expire) {
      for (const auto& g : gateways_) g->expire(now);
      next_expire = now + options_.expire_interval_ms;
    }
    if (ready <= 0) continue;
    const int fd = accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) continue;
    {
      std::lock_guard lock(queue_mu_);
      queue_.push_back(fd);
    }
    queue_cv_.notify_one();
  }
}

void GatewayServer::worker_loop() {
  while (true) {
    int fd = -1;
    {
      std::unique_lock lock(queue_mu_);
      queue_cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (queue_.empty()) return;
      fd = queue_.front();
      queue_.pop_front();
    }
    serve_connection(fd);
  }
}

void GatewayServer::serve_connection(int fd) {
  sockaddr_in6 peer{};
  sockaddr_in6 local{};
  socklen_t plen = sizeof peer;
  socklen_t llen = sizeof local;
  if (getpeername(fd, reinterpret_cast<sockaddr*>(&peer), &plen) < 0 ||
      getsockname(fd, reinterpret_cast<sockaddr*>(&local), &llen) < 0 || peer.sin6_family != AF_INET6) {
    reset_and_close(fd);
    return;
  }
  const auto src = endpoint_of(peer);
  const auto dst = endpoint_of(local);
  FlowKey key{src.addr, dst.addr, src.port, dst.port, IPPROTO_TCP};

  Gateway* gateway = gateway_for(key.dst);
  if (gateway == nullptr || gateway->admit_packet(key, true, options_.clock()).verdict == Verdict::Drop) {
    reset_and_close(fd);
    return;
  }

  drain_request_head(fd, options_.read_timeout_ms);
  write_all(fd, demo_page(key));
  shutdown(fd, SHUT_WR);
  close(fd);
  gateway->record_flow_end(key, options_.clock());
}

}  // namespace addrless::serve

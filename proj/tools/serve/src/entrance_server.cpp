#include "addrless/serve/entrance_server.hpp"

#include <cctype>
#include <stdexcept>
#include <string_view>

#include <httplib.h>

namespace addrless::serve {

std::optional<std::string> bearer_credential(std::string_view authorization) {
  constexpr std::string_view kScheme = "Bearer ";
  if (authorization.size() <= kScheme.size()) return std::nullopt;
  for (std::size_t i = 0; i < kScheme.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(authorization[i])) !=
        std::tolower(static_cast<unsigned char>(kScheme[i]))) {
      return std::nullopt;
    }
  }
  return std::string(authorization.substr(kScheme.size()));
}

std::optional<Ipv6Address> client_address(std::string_view remote_addr) {
  const auto scope = remote_addr.find('%');
  if (scope != std::string_view::npos) remote_addr = remote_addr.substr(0, scope);
  auto addr = Ipv6Address::parse(remote_addr);
  if (!addr) return std::nullopt;
  // ::ffff:0:0/96
  if (addr->high() == 0 && (addr->low() >> 32) == 0xFFFFULL) return std::nullopt;
  return addr;
}

EntranceServer::EntranceServer(std::shared_ptr<Entrance> entrance, EntranceServerOptions options)
    : entrance_(std::move(entrance)), options_(std::move(options)), server_(std::make_unique<httplib::Server>()) {}

EntranceServer::~EntranceServer() { stop(); }

void EntranceServer::start() {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    const auto client = client_address(req.remote_addr);
    if (!client) {
      res.status = 400;
      res.set_content("IPv6 client address required\n", "text/plain");
      return;
    }
    RequestMeta meta;
    meta.client = *client;
    const std::string_view target = req.target.empty() ? std::string_view("/") : std::string_view(req.target);
    const auto q = target.find('?');
    meta.path = std::string(target.substr(0, q));
    if (q != std::string_view::npos) meta.query = std::string(target.substr(q + 1));
    if (req.has_header("Authorization")) meta.credential = bearer_credential(req.get_header_value("Authorization"));

    const auto response = entrance_->handle_request(meta, options_.clock());
    if (const auto* redirect = std::get_if<RedirectDecision>(&response)) {
      res.status = redirect->status;
      res.set_header("Location", redirect->location);
      res.set_header("Cache-Control", "no-store");
      if (options_.log) options_.log("redirect client=" + client->to_string() + " location=" + redirect->location);
    } else {
      res.status = std::get<Deny>(response).status;
      res.set_content("forbidden\n", "text/plain");
      if (options_.log) options_.log("deny client=" + client->to_string());
    }
  };
  server_->Get(".*", handler);
  server_->Post(".*", handler);
  server_->Put(".*", handler);
  server_->Patch(".*", handler);
  server_->Delete(".*", handler);
  server_->Options(".*", handler);

  if (options_.port == 0) {
    const int port = server_->bind_to_any_port(options_.listen);
    if (port <= 0) throw std::runtime_error("cannot bind entrance on [" + options_.listen + "]");
    port_ = static_cast<std::uint16_t>(port);
  } else {
    if (!server_->bind_to_port(options_.listen, options_.port)) {
      throw std::runtime_error("cannot bind entrance on [" + options_.listen + "]:" + std::to_string(options_.port));
    }
    port_ = options_.port;
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void EntranceServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

void EntranceServer::wait() {
  if (thread_.joinable()) thread_.join();
}

}  // namespace addrless::serve

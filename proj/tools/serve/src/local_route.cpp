#include "addrless/serve/local_route.hpp"

#include <linux/netlink.h>
#include <linux/rtnetlink.h>
#include <net/if.h>
#include <sys/socket.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <system_error>

namespace addrless::serve {
namespace {

struct RouteRequest {
  nlmsghdr header;
  rtmsg route;
  std::array<char, 64> attrs;
};

void add_attr(RouteRequest& req, unsigned short type, const void* data, std::size_t len) {
  auto* rta = reinterpret_cast<rtattr*>(reinterpret_cast<char*>(&req) + NLMSG_ALIGN(req.header.nlmsg_len));
  rta->rta_type = type;
  rta->rta_len = static_cast<unsigned short>(RTA_LENGTH(len));
  std::memcpy(RTA_DATA(rta), data, len);
  req.header.nlmsg_len = NLMSG_ALIGN(req.header.nlmsg_len) + RTA_ALIGN(rta->rta_len);
}

// Returns 0 or the negated errno carried by the kernel's ack.
int send_route(const RoutingPrefix& prefix, int type, int flags) {
  const int fd = socket(AF_NETLINK, SOCK_RAW | SOCK_CLOEXEC, NETLINK_ROUTE);
  if (fd < 0) throw std::system_error(errno, std::generic_category(), "netlink socket");

  RouteRequest req{};
  req.header.nlmsg_len = NLMSG_LENGTH(sizeof(rtmsg));
  req.header.nlmsg_type = static_cast<unsigned short>(type);
  req.header.nlmsg_flags = static_cast<unsigned short>(NLM_F_REQUEST | NLM_F_ACK | flags);
  req.header.nlmsg_seq = 1;
  req.route.rtm_family = AF_INET6;
  req.route.rtm_dst_len = static_cast<unsigned char>(prefix.length());
  req.route.rtm_table = RT_TABLE_LOCAL;
  req.route.rtm_protocol = RTPROT_STATIC;
  req.route.rtm_scope = RT_SCOPE_HOST;
  req.route.rtm_type = RTN_LOCAL;

  const auto dst = prefix.base().to_bytes();
  add_attr(req, RTA_DST, dst.data(), dst.size());
  const int lo = static_cast<int>(if_nametoindex("lo"));
  add_attr(req, RTA_OIF, &lo, sizeof lo);

  sockaddr_nl kernel{};
  kernel.nl_family = AF_NETLINK;
  if (sendto(fd, &req, req.header.nlmsg_len, 0, reinterpret_cast<sockaddr*>(&kernel), sizeof kernel) < 0) {
    const int err = errno;
    close(fd);
    throw std::system_error(err, std::generic_category(), "netlink send");
  }

  std::array<char, 4096> buf{};
  const ssize_t n = recv(fd, buf.data(), buf.size(), 0);
  const int recv_err = errno;
  close(fd);
  if (n < 0) throw std::system_error(recv_err, std::generic_category(), "netlink recv");

  const auto* reply = reinterpret_cast<const nlmsghdr*>(buf.data());
  if (NLMSG_OK(reply, static_cast<unsigned>(n)) && reply->nlmsg_type == NLMSG_ERROR) {
    return reinterpret_cast<const nlmsgerr*>(NLMSG_DATA(reply))->error;
  }
  return 0;
}

}  // namespace

LocalRoute::LocalRoute(const RoutingPrefix& prefix) : prefix_(prefix) {
  const int rc = send_route(prefix_, RTM_NEWROUTE, NLM_F_CREATE | NLM_F_EXCL);
  if (rc == -EEXIST) return;
  if (rc != 0) throw std::system_error(-rc, std::generic_category(), "add local route " + prefix_.to_string());
  owned_ = true;
}

LocalRoute::~LocalRoute() {
  if (!owned_) return;
  try {
    send_route(prefix_, RTM_DELROUTE, 0);
  } catch (...) {
  }
}

}  // namespace addrless::serve

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

namespace addrless {

/// A 128-bit IPv6 address held as two host-order 64-bit halves. Bit 1 in the
/// usual RFC numbering is the most significant bit of high().
class Ipv6Address {
 public:
  constexpr Ipv6Address() noexcept = default;
  constexpr Ipv6Address(std::uint64_t high, std::uint64_t low) noexcept : high_(high), low_(low) {}

  static Ipv6Address from_bytes(std::span<const std::uint8_t, 16> bytes) noexcept;

  /// Parses any textual form accepted by inet_pton(AF_INET6). Brackets are not
  /// accepted.
  static std::optional<Ipv6Address> parse(std::string_view text);

  /// Same as parse() but throws ParseError.
  static Ipv6Address from_string(std::string_view text);

  std::array<std::uint8_t, 16> to_bytes() const noexcept;

  /// RFC 5952 canonical text: lowercase, zero-run compressed with "::".
  std::string to_string() const;

  constexpr std::uint64_t high() const noexcept { return high_; }
  constexpr std::uint64_t low() const noexcept { return low_; }

  friend constexpr auto operator<=>(const Ipv6Address&, const Ipv6Address&) noexcept = default;

 private:
  std::uint64_t high_ = 0;
  std::uint64_t low_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Ipv6Address& addr);

struct Ipv6AddressHash {
  std::size_t operator()(const Ipv6Address& addr) const noexcept {
    std::uint64_t h = addr.high() * 0x9E3779B97F4A7C15ULL;
    h ^= addr.low() + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

/// An IPv6 prefix. All bits of base() past length() are zero.
class RoutingPrefix {
 public:
  /// Throws ParseError when length is outside [0, 128] or host bits are set.
  RoutingPrefix(Ipv6Address base, int length);

  /// Masks off host bits instead of rejecting them.
  static RoutingPrefix containing(const Ipv6Address& addr, int length);

  /// Parses "2001:db8::/64".
  static RoutingPrefix parse(std::string_view text);

  const Ipv6Address& base() const noexcept { return base_; }
  int length() const noexcept { return length_; }

  bool contains(const Ipv6Address& addr) const noexcept;
  bool contains(const RoutingPrefix& other) const noexcept;

  /// The index-th /64 under this prefix. Requires length() <= 64 and index
  /// below 2^(64 - length()).
  RoutingPrefix subnet64(std::uint64_t index) const;

  /// base() with its low 64 bits replaced. Requires length() <= 64.
  Ipv6Address with_suffix(std::uint64_t suffix) const;

  std::string to_string() const;

  friend bool operator==(const RoutingPrefix&, const RoutingPrefix&) noexcept = default;

 private:
  Ipv6Address base_;
  int length_ = 0;
};

std::ostream& operator<<(std::ostream& os, const RoutingPrefix& prefix);

/// Mask with the top `length` bits of a 128-bit value set, split in halves.
Ipv6Address prefix_mask(int length) noexcept;

}  // namespace addrless

#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>

#include "addrless/cipher.hpp"
#include "addrless/ipv6.hpp"

namespace addrless {

/// Milliseconds since the Unix epoch. Always passed in explicitly; nothing in
/// the core reads a clock.
using TimeMs = std::int64_t;

/// Time-derived salt: floor((now - t0) / step).
struct Salt {
  std::uint64_t value = 0;

  friend constexpr auto operator<=>(const Salt&, const Salt&) noexcept = default;
};

/// Open interval of accepted lags (now - T_s), in milliseconds.
///   symmetric:  (0, threshold)
///   asymmetric: (-threshold1, threshold2), for clock skew between entrance
///               and gateway
struct VerifyWindow {
  enum class Kind { Symmetric, Asymmetric };

  Kind kind = Kind::Symmetric;
  std::int64_t lower_ms = 0;
  std::int64_t upper_ms = 10'000;

  static VerifyWindow symmetric(std::int64_t threshold_ms);
  static VerifyWindow asymmetric(std::int64_t threshold1_ms, std::int64_t threshold2_ms);

  std::int64_t length_ms() const noexcept { return upper_ms - lower_ms; }

  /// Strict at both ends.
  template <typename T>
  constexpr bool contains(T lag_ms) const noexcept {
    return lag_ms > static_cast<T>(lower_ms) && lag_ms < static_cast<T>(upper_ms);
  }

  friend bool operator==(const VerifyWindow&, const VerifyWindow&) = default;
};

struct SaltParams {
  TimeMs t0_ms = 0;
  std::int64_t step_ms = 5;
  VerifyWindow window;

  /// Throws DomainError unless step >= 1 and both thresholds are positive.
  void validate() const;

  friend bool operator==(const SaltParams&, const SaltParams&) = default;
};

/// DJB2 (h = h * 33 + byte, h0 = 5381, wrapping 64-bit) over the 16 address
/// bytes in network order.
std::uint64_t hash_source(const Ipv6Address& source) noexcept;

/// Throws ClockBeforeEpochError when now < t0.
Salt compute_salt(TimeMs now_ms, const SaltParams& params);

/// salt * step + t0. Throws OverflowError when that leaves the TimeMs range.
TimeMs recover_send_time(Salt salt, const SaltParams& params);

constexpr std::uint64_t apply_salt(std::uint64_t hashed, Salt salt) noexcept {
  return hashed ^ salt.value;
}

/// Generates and verifies per-connection destination addresses under a /64.
///
/// The ciphertext fills the low block_bits() of the 64-bit suffix; for the
/// 16-bit toy cipher the remaining suffix bits are zero. Instances are
/// immutable and safe to share between threads.
class AddressCodec {
 public:
  AddressCodec(CipherKind kind, const CipherKey& key, SaltParams params);
  AddressCodec(std::shared_ptr<const BlockCipher> cipher, SaltParams params);

  /// Throws PrefixLengthError unless prefix is a /64, and propagates
  /// compute_salt errors.
  Ipv6Address generate(const Ipv6Address& source, const RoutingPrefix& prefix, TimeMs now_ms) const;

  /// Fails closed: any malformed or foreign input yields false.
  bool verify(const Ipv6Address& source, const Ipv6Address& destination,
              const RoutingPrefix& prefix, TimeMs now_ms) const noexcept;

  /// The suffix carried for a given source and salt.
  std::uint64_t suffix_for(const Ipv6Address& source, Salt salt) const noexcept;

  /// Decrypts a suffix back to the (possibly truncated) salt for a source.
  /// Empty if the suffix has bits outside the cipher block.
  std::optional<std::uint64_t> recover_salt_bits(const Ipv6Address& source,
                                                 std::uint64_t suffix) const noexcept;

  const SaltParams& params() const noexcept { return params_; }
  const BlockCipher& cipher() const noexcept { return *cipher_; }

  /// Number of suffix bits an attacker has to guess.
  int suffix_bits() const noexcept { return cipher_->block_bits(); }

 private:
  std::shared_ptr<const BlockCipher> cipher_;
  SaltParams params_;

  bool lag_in_window(std::uint64_t salt, TimeMs now_ms) const noexcept;
};

Ipv6Address generate_address(const Ipv6Address& source, const RoutingPrefix& prefix,
                             const CipherKey& key, const SaltParams& params, TimeMs now_ms,
                             CipherKind kind = CipherKind::ReferenceDes);

bool verify_address(const Ipv6Address& source, const Ipv6Address& destination,
                    const RoutingPrefix& prefix, const CipherKey& key,
                    const SaltParams& params, TimeMs now_ms,
                    CipherKind kind = CipherKind::ReferenceDes) noexcept;

}  // namespace addrless

#include "addrless/codec.hpp"

#include <limits>
#include <string>

#include "addrless/errors.hpp"

namespace addrless {
namespace {

__extension__ using Int128 = __int128;

constexpr Int128 kTimeMax = std::numeric_limits<TimeMs>::max();
constexpr Int128 kTimeMin = std::numeric_limits<TimeMs>::min();

Int128 floor_div(Int128 num, Int128 den) {
  Int128 q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return q;
}

}  // namespace

VerifyWindow VerifyWindow::symmetric(std::int64_t threshold_ms) {
  return {Kind::Symmetric, 0, threshold_ms};
}

VerifyWindow VerifyWindow::asymmetric(std::int64_t threshold1_ms, std::int64_t threshold2_ms) {
  return {Kind::Asymmetric, -threshold1_ms, threshold2_ms};
}

void SaltParams::validate() const {
  if (step_ms < 1) throw DomainError("salt step must be at least 1 ms");
  if (window.upper_ms <= 0) throw DomainError("verification threshold must be positive");
  if (window.kind == VerifyWindow::Kind::Symmetric && window.lower_ms != 0) {
    throw DomainError("symmetric window must start at 0");
  }
  if (window.kind == VerifyWindow::Kind::Asymmetric && window.lower_ms >= 0) {
    throw DomainError("asymmetric window needs a positive threshold1");
  }
}

std::uint64_t hash_source(const Ipv6Address& source) noexcept {
  std::uint64_t h = 5381;
  for (std::uint8_t b : source.to_bytes()) h = h * 33 + b;
  return h;
}

Salt compute_salt(TimeMs now_ms, const SaltParams& params) {
  if (now_ms < params.t0_ms) {
    throw ClockBeforeEpochError("clock " + std::to_string(now_ms) + " ms is before t0 " +
                                std::to_string(params.t0_ms) + " ms");
  }
  if (params.step_ms < 1) throw DomainError("salt step must be at least 1 ms");
  const auto elapsed = static_cast<std::uint64_t>(now_ms) - static_cast<std::uint64_t>(params.t0_ms);
  return Salt{elapsed / static_cast<std::uint64_t>(params.step_ms)};
}

TimeMs recover_send_time(Salt salt, const SaltParams& params) {
  const Int128 t = static_cast<Int128>(salt.value) * params.step_ms + params.t0_ms;
  if (t > kTimeMax || t < kTimeMin) {
    throw OverflowError("salt " + std::to_string(salt.value) + " maps outside the timestamp range");
  }
  return static_cast<TimeMs>(t);
}

AddressCodec::AddressCodec(CipherKind kind, const CipherKey& key, SaltParams params)
    : AddressCodec(std::shared_ptr<const BlockCipher>(make_cipher(kind, key)), params) {}

AddressCodec::AddressCodec(std::shared_ptr<const BlockCipher> cipher, SaltParams params)
    : cipher_(std::move(cipher)), params_(params) {
  params_.validate();
}

std::uint64_t AddressCodec::suffix_for(const Ipv6Address& source, Salt salt) const noexcept {
  const std::uint64_t plain = apply_salt(hash_source(source), salt) & cipher_->block_mask();
  return cipher_->encrypt(plain);
}

std::optional<std::uint64_t> AddressCodec::recover_salt_bits(const Ipv6Address& source,
                                                             std::uint64_t suffix) const noexcept {
  const std::uint64_t mask = cipher_->block_mask();
  if ((suffix & ~mask) != 0) return std::nullopt;
  return (cipher_->decrypt(suffix) ^ hash_source(source)) & mask;
}

Ipv6Address AddressCodec::generate(const Ipv6Address& source, const RoutingPrefix& prefix,
                                   TimeMs now_ms) const {
  if (prefix.length() != 64) {
    throw PrefixLengthError("address generation needs a /64 routing prefix, got " + prefix.to_string());
  }
  return prefix.with_suffix(suffix_for(source, compute_salt(now_ms, params_)));
}

bool AddressCodec::lag_in_window(std::uint64_t salt, TimeMs now_ms) const noexcept {
  const Int128 sent = static_cast<Int128>(salt) * params_.step_ms + params_.t0_ms;
  if (sent > kTimeMax) return false;
  return params_.window.contains(static_cast<Int128>(now_ms) - sent);
}

bool AddressCodec::verify(const Ipv6Address& source, const Ipv6Address& destination,
                          const RoutingPrefix& prefix, TimeMs now_ms) const noexcept {
  if (prefix.length() != 64 || !prefix.contains(destination)) return false;
  const auto bits = recover_salt_bits(source, destination.low());
  if (!bits) return false;

  const int width = cipher_->block_bits();
  if (width == 64) return lag_in_window(*bits, now_ms);

  // Truncated block: lift the recovered residue to the full salt nearest the
  // current one. The window is far shorter than 2^width steps, so only the
  // residue class member at or below the current salt and the one above it
  // can ever land inside.
  const Int128 modulus = Int128{1} << width;
  const Int128 current = floor_div(static_cast<Int128>(now_ms) - params_.t0_ms, params_.step_ms);
  const Int128 residue = static_cast<Int128>(*bits);
  Int128 below = current - (((current - residue) % modulus) + modulus) % modulus;
  for (Int128 candidate : {below, below + modulus}) {
    if (candidate < 0 || candidate > static_cast<Int128>(std::numeric_limits<std::uint64_t>::max())) continue;
    if (lag_in_window(static_cast<std::uint64_t>(candidate), now_ms)) return true;
  }
  return false;
}

Ipv6Address generate_address(const Ipv6Address& source, const RoutingPrefix& prefix,
                             const CipherKey& key, const SaltParams& params, TimeMs now_ms,
                             CipherKind kind) {
  return AddressCodec(kind, key, params).generate(source, prefix, now_ms);
}

bool verify_address(const Ipv6Address& source, const Ipv6Address& destination,
                    const RoutingPrefix& prefix, const CipherKey& key, const SaltParams& params,
                    TimeMs now_ms, CipherKind kind) noexcept {
  try {
    return AddressCodec(kind, key, params).verify(source, destination, prefix, now_ms);
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace addrless

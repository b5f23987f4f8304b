#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace addrless {

enum class CipherKind {
  ReferenceDes,  ///< DES, 64-bit block, 8-byte key.
  Toy16,         ///< Insecure 16-bit Feistel, 2-byte key. Desk-scale statistics only.
};

std::string_view cipher_name(CipherKind kind) noexcept;

/// "reference-des" or "toy16". Throws ParseError.
CipherKind parse_cipher_name(std::string_view name);

std::size_t cipher_key_size(CipherKind kind) noexcept;
int cipher_block_bits(CipherKind kind) noexcept;

/// Raw key material. The size is checked against a cipher only when the two
/// meet in make_cipher().
class CipherKey {
 public:
  CipherKey() = default;
  explicit CipherKey(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {}

  /// Big-endian: 0x0123456789ABCDEF becomes bytes 01 23 .. EF.
  static CipherKey from_u64(std::uint64_t value);
  static CipherKey from_u16(std::uint16_t value);

  /// Lowercase or uppercase hex, no separators. Throws ParseError.
  static CipherKey from_hex(std::string_view hex);
  std::string to_hex() const;

  std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }
  std::size_t size() const noexcept { return bytes_.size(); }

  friend bool operator==(const CipherKey&, const CipherKey&) = default;

 private:
  std::vector<std::uint8_t> bytes_;
};

/// A keyed permutation of the block domain [0, 2^block_bits()).
class BlockCipher {
 public:
  virtual ~BlockCipher() = default;

  virtual CipherKind kind() const noexcept = 0;
  virtual std::uint64_t encrypt(std::uint64_t block) const noexcept = 0;
  virtual std::uint64_t decrypt(std::uint64_t block) const noexcept = 0;

  int block_bits() const noexcept { return cipher_block_bits(kind()); }
  std::uint64_t block_mask() const noexcept {
    return block_bits() == 64 ? ~0ULL : (1ULL << block_bits()) - 1;
  }
  bool insecure() const noexcept { return kind() == CipherKind::Toy16; }
};

/// DES (FIPS 46-3) in single-block ECB form. Parity bits of the key are ignored.
class DesCipher final : public BlockCipher {
 public:
  explicit DesCipher(const CipherKey& key);

  CipherKind kind() const noexcept override { return CipherKind::ReferenceDes; }
  std::uint64_t encrypt(std::uint64_t block) const noexcept override;
  std::uint64_t decrypt(std::uint64_t block) const noexcept override;

 private:
  // Per round, the eight 6-bit subkey chunks in S-box order.
  std::array<std::array<std::uint8_t, 8>, 16> subkeys_{};

  std::uint64_t crypt(std::uint64_t block, bool decrypt) const noexcept;
};

/// 16-bit Feistel network, 6 rounds over 8-bit halves. NOT secure.
class Toy16Cipher final : public BlockCipher {
 public:
  explicit Toy16Cipher(const CipherKey& key);

  CipherKind kind() const noexcept override { return CipherKind::Toy16; }
  std::uint64_t encrypt(std::uint64_t block) const noexcept override;
  std::uint64_t decrypt(std::uint64_t block) const noexcept override;

  static constexpr int kRounds = 6;

 private:
  std::array<std::uint8_t, kRounds> round_keys_{};
};

/// Throws KeySizeError when the key does not match the cipher.
std::unique_ptr<BlockCipher> make_cipher(CipherKind kind, const CipherKey& key);

std::uint64_t encrypt_block(std::uint64_t block, const CipherKey& key, CipherKind kind);
std::uint64_t decrypt_block(std::uint64_t block, const CipherKey& key, CipherKind kind);

}  // namespace addrless

#include "addrless/cipher.hpp"

#include <charconv>

#include "addrless/errors.hpp"

namespace addrless {

std::string_view cipher_name(CipherKind kind) noexcept {
  switch (kind) {
    case CipherKind::ReferenceDes:
      return "reference-des";
    case CipherKind::Toy16:
      return "toy16";
  }
  return "unknown";
}

CipherKind parse_cipher_name(std::string_view name) {
  if (name == "reference-des") return CipherKind::ReferenceDes;
  if (name == "toy16") return CipherKind::Toy16;
  throw ParseError("unknown cipher '" + std::string(name) + "' (expected reference-des or toy16)");
}

std::size_t cipher_key_size(CipherKind kind) noexcept {
  return kind == CipherKind::ReferenceDes ? 8 : 2;
}

int cipher_block_bits(CipherKind kind) noexcept {
  return kind == CipherKind::ReferenceDes ? 64 : 16;
}

CipherKey CipherKey::from_u64(std::uint64_t value) {
  std::vector<std::uint8_t> bytes(8);
  for (int i = 7; i >= 0; --i, value >>= 8) bytes[i] = static_cast<std::uint8_t>(value);
  return CipherKey(std::move(bytes));
}

CipherKey CipherKey::from_u16(std::uint16_t value) {
  return CipherKey({static_cast<std::uint8_t>(value >> 8), static_cast<std::uint8_t>(value)});
}

CipherKey CipherKey::from_hex(std::string_view hex) {
  if (hex.empty() || hex.size() % 2 != 0) {
    throw ParseError("key hex must have an even, non-zero number of digits");
  }
  std::vector<std::uint8_t> bytes(hex.size() / 2);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    const char* first = hex.data() + 2 * i;
    auto [ptr, ec] = std::from_chars(first, first + 2, bytes[i], 16);
    if (ec != std::errc{} || ptr != first + 2) {
      throw ParseError("invalid hex digit in key");
    }
  }
  return CipherKey(std::move(bytes));
}

std::string CipherKey::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (std::uint8_t b : bytes_) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

std::unique_ptr<BlockCipher> make_cipher(CipherKind kind, const CipherKey& key) {
  switch (kind) {
    case CipherKind::ReferenceDes:
      return std::make_unique<DesCipher>(key);
    case CipherKind::Toy16:
      return std::make_unique<Toy16Cipher>(key);
  }
  throw ParseError("unknown cipher kind");
}

std::uint64_t encrypt_block(std::uint64_t block, const CipherKey& key, CipherKind kind) {
  return make_cipher(kind, key)->encrypt(block);
}

std::uint64_t decrypt_block(std::uint64_t block, const CipherKey& key, CipherKind kind) {
  return make_cipher(kind, key)->decrypt(block);
}

}  // namespace addrless

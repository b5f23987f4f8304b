#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "addrless/cipher.hpp"
#include "addrless/codec.hpp"
#include "addrless/entrance.hpp"
#include "addrless/ipv6.hpp"

namespace addrless {

struct PortsConfig {
  std::uint16_t entrance = 8080;
  std::uint16_t service = 8081;
};

/// The configuration file shared by entrance and gateway. Both sides must
/// load the same key, salt parameters and prefixes.
struct SharedConfig {
  CipherKind cipher = CipherKind::ReferenceDes;
  std::filesystem::path key_file;  ///< as written in the file
  CipherKey key;                   ///< loaded from key_file
  SaltParams salt;
  std::vector<RoutingPrefix> prefixes;
  std::string listen = "::";
  PortsConfig ports;
  LbKind lb_strategy = LbKind::Static;
  bool cache_mode = false;
  std::int64_t idle_timeout_ms = 300'000;
  AuthConfig auth;
  bool insecure = false;

  /// Suffix bits carrying ciphertext: the narrower of the host part of the
  /// longest prefix and the cipher block.
  int suffix_bits() const noexcept;
  /// ceil(window length / step): salts accepted at one instant.
  std::uint64_t live_salts() const noexcept;
  /// suffix_bits() - log2(live_salts()).
  double security_margin() const;
};

struct LoadOptions {
  /// Accept configurations failing the 46-bit margin (mandatory for toy16).
  bool allow_insecure = false;
  bool load_key = true;
};

/// Throws ConfigError listing every violation, or ParseError if the file is
/// not JSON at all.
SharedConfig load_config(const std::filesystem::path& path, LoadOptions options = {});

/// key_file is resolved against base_dir when relative.
SharedConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir,
                          LoadOptions options = {});

std::string config_to_json(const SharedConfig& config);

/// Cryptographically random key for the cipher (getrandom(2)).
CipherKey generate_key(CipherKind kind);

/// Lowercase hex on one line, mode 0600.
void write_key_file(const std::filesystem::path& path, const CipherKey& key);

/// Throws ParseError if the file is unreadable or the size does not fit kind.
CipherKey read_key_file(const std::filesystem::path& path, CipherKind kind);

AddressCodec make_codec(const SharedConfig& config);

}  // namespace addrless

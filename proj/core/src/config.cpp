#include "addrless/config.hpp"

#include <sys/random.h>
#include <sys/stat.h>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "addrless/analysis.hpp"
#include "addrless/errors.hpp"

namespace addrless {

using nlohmann::json;

ConfigError::ConfigError(std::vector<std::string> violations)
    : Error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& v : violations) msg += "\n  - " + v;
        return msg;
      }()),
      violations_(std::move(violations)) {}

int SharedConfig::suffix_bits() const noexcept {
  int bits = cipher_block_bits(cipher);
  for (const auto& p : prefixes) bits = std::min(bits, 128 - p.length());
  return bits;
}

std::uint64_t SharedConfig::live_salts() const noexcept {
  const auto len = static_cast<std::uint64_t>(std::max<std::int64_t>(salt.window.length_ms(), 1));
  const auto step = static_cast<std::uint64_t>(std::max<std::int64_t>(salt.step_ms, 1));
  return (len + step - 1) / step;
}

double SharedConfig::security_margin() const {
  return analysis::security_margin(std::max(suffix_bits(), 1), live_salts()).margin;
}

namespace {

std::string format_bits(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// Runs one field reader; a failure becomes a violation instead of aborting.
template <typename Fn>
void field(std::vector<std::string>& violations, std::string_view name, Fn&& fn) {
  try {
    fn();
  } catch (const json::exception& e) {
    violations.push_back(std::string(name) + ": " + e.what());
  } catch (const Error& e) {
    violations.push_back(std::string(name) + ": " + e.what());
  }
}

}  // namespace

SharedConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir, LoadOptions options) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("configuration is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("configuration must be a JSON object");

  static const char* const kKnown[] = {"cipher",      "key_file",   "salt",            "prefixes", "listen", "ports",
                                       "lb_strategy", "cache_mode", "idle_timeout_ms", "auth",     "insecure"};
  std::vector<std::string> violations;
  for (const auto& [key, _] : j.items()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
      violations.push_back("unknown field '" + key + "'");
    }
  }

  SharedConfig c;
  field(violations, "cipher", [&] { c.cipher = parse_cipher_name(j.at("cipher").get<std::string>()); });
  field(violations, "key_file", [&] { c.key_file = j.at("key_file").get<std::string>(); });
  field(violations, "salt", [&] {
    const json& s = j.at("salt");
    if (!s.contains("t0_ms")) throw ParseError("t0_ms is required (fixed deployment epoch, shared by both sides)");
    c.salt.t0_ms = s.at("t0_ms").get<std::int64_t>();
    c.salt.step_ms = s.at("step_x_ms").get<std::int64_t>();
    const json& w = s.at("window");
    const auto kind = w.at("kind").get<std::string>();
    if (kind == "symmetric") {
      c.salt.window = VerifyWindow::symmetric(w.at("threshold_ms").get<std::int64_t>());
    } else if (kind == "asymmetric") {
      c.salt.window =
          VerifyWindow::asymmetric(w.at("threshold1_ms").get<std::int64_t>(), w.at("threshold2_ms").get<std::int64_t>());
    } else {
      throw ParseError("window.kind must be symmetric or asymmetric");
    }
    c.salt.validate();
  });
  field(violations, "prefixes", [&] {
    for (const auto& p : j.at("prefixes")) c.prefixes.push_back(RoutingPrefix::parse(p.get<std::string>()));
  });
  field(violations, "listen", [&] {
    if (j.contains("listen")) c.listen = j["listen"].get<std::string>();
  });
  field(violations, "ports", [&] {
    if (!j.contains("ports")) return;
    const json& p = j["ports"];
    c.ports.entrance = p.value("entrance", c.ports.entrance);
    c.ports.service = p.value("service", c.ports.service);
  });
  field(violations, "lb_strategy", [&] {
    if (j.contains("lb_strategy")) c.lb_strategy = parse_lb_kind(j["lb_strategy"].get<std::string>());
  });
  field(violations, "cache_mode", [&] { c.cache_mode = j.value("cache_mode", false); });
  field(violations, "idle_timeout_ms", [&] {
    c.idle_timeout_ms = j.value("idle_timeout_ms", c.idle_timeout_ms);
    if (c.idle_timeout_ms <= 0) throw DomainError("must be positive");
  });
  field(violations, "auth", [&] {
    if (!j.contains("auth")) return;
    const json& a = j["auth"];
    const auto mode = a.value("mode", std::string("off"));
    if (mode == "off") {
      c.auth.mode = AuthConfig::Mode::Off;
    } else if (mode == "token-list") {
      c.auth.mode = AuthConfig::Mode::TokenList;
      c.auth.tokens = a.at("tokens").get<std::vector<std::string>>();
      if (c.auth.tokens.empty()) throw DomainError("token-list mode needs at least one token");
    } else {
      throw ParseError("auth.mode must be off or token-list");
    }
  });
  field(violations, "insecure", [&] { c.insecure = j.value("insecure", false); });

  // Cross-field rules.
  if (j.contains("prefixes") && c.prefixes.empty()) violations.push_back("prefixes: at least one prefix is required");
  for (const auto& p : c.prefixes) {
    if (p.length() > 64 && c.cipher == CipherKind::ReferenceDes) {
      violations.push_back("prefixes: " + p.to_string() +
                           " is longer than /64; the 64-bit reference ciphertext does not fit");
    } else if (p.length() != 64) {
      violations.push_back("prefixes: " + p.to_string() + " is not a /64; list the /64s to use under it");
    }
  }
  if (!c.prefixes.empty()) {
    if (c.lb_strategy == LbKind::Static && c.prefixes.size() != 1) {
      violations.push_back("lb_strategy: static takes exactly one prefix");
    }
    if (c.lb_strategy != LbKind::Static && c.prefixes.size() < 2) {
      violations.push_back("lb_strategy: " + std::string(lb_kind_name(c.lb_strategy)) + " needs at least two prefixes");
    }
  }

  const bool insecure_ok = options.allow_insecure || c.insecure;
  if (c.cipher == CipherKind::Toy16 && !insecure_ok) {
    violations.push_back("cipher: toy16 is insecure and is only accepted with the insecure flag");
  }
  if (!c.prefixes.empty() && c.salt.step_ms >= 1 && c.salt.window.length_ms() > 0) {
    const double margin = c.security_margin();
    if (margin < analysis::kSafeMarginBits && !insecure_ok) {
      violations.push_back("security margin " + format_bits(margin) + " bits (suffix " +
                           std::to_string(c.suffix_bits()) + " - log2 " + std::to_string(c.live_salts()) +
                           " live salts) is below 46");
    }
  }

  if (options.load_key && !c.key_file.empty()) {
    field(violations, "key_file", [&] {
      const auto path = c.key_file.is_absolute() ? c.key_file : base_dir / c.key_file;
      c.key = read_key_file(path, c.cipher);
    });
  }

  if (!violations.empty()) throw ConfigError(std::move(violations));
  return c;
}

SharedConfig load_config(const std::filesystem::path& path, LoadOptions options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open configuration file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path(), options);
}

std::string config_to_json(const SharedConfig& c) {
  json window;
  if (c.salt.window.kind == VerifyWindow::Kind::Symmetric) {
    window = {{"kind", "symmetric"}, {"threshold_ms", c.salt.window.upper_ms}};
  } else {
    window = {{"kind", "asymmetric"}, {"threshold1_ms", -c.salt.window.lower_ms}, {"threshold2_ms", c.salt.window.upper_ms}};
  }
  json prefixes = json::array();
  for (const auto& p : c.prefixes) prefixes.push_back(p.to_string());
  json j = {
      {"cipher", cipher_name(c.cipher)},
      {"key_file", c.key_file.string()},
      {"salt", {{"t0_ms", c.salt.t0_ms}, {"step_x_ms", c.salt.step_ms}, {"window", window}}},
      {"prefixes", prefixes},
      {"listen", c.listen},
      {"ports", {{"entrance", c.ports.entrance}, {"service", c.ports.service}}},
      {"lb_strategy", lb_kind_name(c.lb_strategy)},
      {"cache_mode", c.cache_mode},
      {"idle_timeout_ms", c.idle_timeout_ms},
      {"auth", c.auth.mode == AuthConfig::Mode::Off
                   ? json{{"mode", "off"}}
                   : json{{"mode", "token-list"}, {"tokens", c.auth.tokens}}},
      {"insecure", c.insecure},
  };
  return j.dump(2) + "\n";
}

CipherKey generate_key(CipherKind kind) {
  std::vector<std::uint8_t> bytes(cipher_key_size(kind));
  std::size_t filled = 0;
  while (filled < bytes.size()) {
    const ssize_t n = getrandom(bytes.data() + filled, bytes.size() - filled, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw std::system_error(errno, std::generic_category(), "getrandom");
    }
    filled += static_cast<std::size_t>(n);
  }
  return CipherKey(std::move(bytes));
}

void write_key_file(const std::filesystem::path& path, const CipherKey& key) {
  {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::system_error(errno, std::generic_category(), "cannot write " + path.string());
    std::filesystem::permissions(path, std::filesystem::perms::owner_read | std::filesystem::perms::owner_write,
                                 std::filesystem::perm_options::replace);
    out << key.to_hex() << '\n';
    if (!out) throw std::system_error(errno, std::generic_category(), "cannot write " + path.string());
  }
}

CipherKey read_key_file(const std::filesystem::path& path, CipherKind kind) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open key file " + path.string());
  std::string line;
  std::getline(in, line);
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
  if (line.size() != 2 * cipher_key_size(kind)) {
    throw ParseError("key file " + path.string() + " must hold " + std::to_string(2 * cipher_key_size(kind)) +
                     " hex digits for " + std::string(cipher_name(kind)));
  }
  return CipherKey::from_hex(line);
}

AddressCodec make_codec(const SharedConfig& config) { return AddressCodec(config.cipher, config.key, config.salt); }

}  // namespace addrless

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace addrless {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// The injected clock reads earlier than the salt epoch t0.
class ClockBeforeEpochError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

class KeySizeError : public Error {
 public:
  using Error::Error;
};

class PrefixLengthError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidScenarioError : public Error {
 public:
  using Error::Error;
};

/// Configuration failed validation. Carries every violation found, not just
/// the first one.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

}  // namespace addrless

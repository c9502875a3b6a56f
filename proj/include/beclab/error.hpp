#pragma once

#include <stdexcept>
#include <string>

namespace beclab {

// Base for every error the library raises deliberately.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Precondition or contract violation by the caller (mismatched grids, zero field, ...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

// A numerical procedure failed to produce a usable answer.
class NumericalError : public Error {
public:
  using Error::Error;
};

// Malformed configuration. Carries the offending line (0 if unknown) and key.
class ConfigError : public Error {
public:
  ConfigError(const std::string& what, int line = 0, std::string key = {})
      : Error(format(what, line, key)), line_(line), key_(std::move(key)) {}

  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

private:
  static std::string format(const std::string& what, int line, const std::string& key) {
    std::string msg;
    if (line > 0) msg += "line " + std::to_string(line) + ": ";
    if (!key.empty()) msg += "'" + key + "': ";
    return msg + what;
  }

  int line_;
  std::string key_;
};

}  // namespace beclab

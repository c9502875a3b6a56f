#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "beclab/error.hpp"

namespace beclab {

/// INI-style configuration: `[section]` headers, `key = value` lines, `#` or `;`
/// comments. Keys outside any section belong to the "" section. Every entry
/// remembers its source line so validation errors can point at it.
class Config {
public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static Config parse(const std::string& text);
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& section, const std::string& key) const;
  const Entry* find(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long get_int(const std::string& section, const std::string& key, long fallback) const;
  /// Comma-separated list of doubles.
  std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                  const std::vector<double>& fallback) const;

  void set(const std::string& section, const std::string& key, const std::string& value);

  /// Canonical text (sections and keys sorted); parse(to_string()) reproduces the values.
  std::string to_string() const;

  const std::map<std::string, std::map<std::string, Entry>>& sections() const noexcept { return sections_; }

private:
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

std::string format_double(double v);

}  // namespace beclab

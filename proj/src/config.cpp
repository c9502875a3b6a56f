#include "beclab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace beclab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, int line, const std::string& key) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf") return INFINITY;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError("expected a number, got '" + t + "'", line, key);
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto cut = raw.find_first_of("#;");
    const std::string s = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header", line);
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) throw ConfigError("empty section name", line);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw ConfigError("missing key before '='", line);
    auto& sec = cfg.sections_[section];
    if (sec.count(key)) throw ConfigError("duplicate key", line, section.empty() ? key : section + "." + key);
    sec[key] = Entry{trim(s.substr(eq + 1)), line};
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool Config::has(const std::string& section, const std::string& key) const { return find(section, key) != nullptr; }

const Config::Entry* Config::find(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  const Entry* e = find(section, key);
  return e ? e->value : fallback;
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
  const Entry* e = find(section, key);
  return e ? parse_double(e->value, e->line, section + "." + key) : fallback;
}

long Config::get_int(const std::string& section, const std::string& key, long fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  const std::string t = trim(e->value);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError("expected an integer, got '" + t + "'", e->line, section + "." + key);
  return v;
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key,
                                        const std::vector<double>& fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  std::vector<double> out;
  std::stringstream ss(e->value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, e->line, section + "." + key));
  if (out.empty()) throw ConfigError("empty list", e->line, section + "." + key);
  return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  sections_[section][key] = Entry{value, 0};
}

std::string Config::to_string() const {
  std::ostringstream os;
  for (const auto& [name, entries] : sections_) {
    if (!name.empty()) os << '[' << name << "]\n";
    for (const auto& [key, e] : entries) os << key << " = " << e.value << '\n';
  }
  return os.str();
}

}  // namespace beclab

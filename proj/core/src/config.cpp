#include "fskjcr/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "fskjcr/error.hpp"

namespace fskjcr {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view text, const std::string& key) {
  const std::string_view t = trim(text);
  std::string lower(t);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "inf" || lower == "+inf" || lower == "infinity") return std::numeric_limits<double>::infinity();
  if (lower == "-inf" || lower == "-infinity") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc{} || ptr != last || std::isnan(v)) {
    throw ConfigError("key '" + key + "': '" + std::string(t) + "' is not a number");
  }
  return v;
}

long to_long(std::string_view text, const std::string& key) {
  const double v = to_double(text, key);
  if (std::isinf(v)) return std::numeric_limits<long>::max() * (v > 0 ? 1 : -1);
  if (v != std::floor(v) || std::abs(v) > 9.0e18) {
    throw ConfigError("key '" + key + "': '" + std::string(trim(text)) + "' is not an integer");
  }
  return static_cast<long>(v);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    const auto part = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!part.empty()) out.push_back(part);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool valid_key(std::string_view k) {
  if (k.empty()) return false;
  return std::all_of(k.begin(), k.end(), [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '.' || c == '-'; });
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Config Config::parse(std::string_view text, const std::string& source) {
  Config cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(line_no);
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (const auto hash = value.find(" #"); hash != std::string_view::npos) value = trim(value.substr(0, hash));
    if (!valid_key(key)) throw ConfigError(where + ": invalid key '" + std::string(key) + "'");
    if (cfg.has(std::string(key))) throw ConfigError(where + ": duplicate key '" + std::string(key) + "'");
    cfg.values_[std::string(key)] = std::string(value);
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

void Config::set(const std::string& key, const std::string& value) {
  if (!valid_key(key)) throw ConfigError("invalid key '" + key + "'");
  values_[key] = std::string(trim(value));
}

void Config::set_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  set(std::string(trim(assignment.substr(0, eq))), std::string(trim(assignment.substr(eq + 1))));
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : to_double(it->second, key);
}

long Config::get_long(const std::string& key, long fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : to_long(it->second, key);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const auto& v = it->second;
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("key '" + key + "': '" + v + "' is not a boolean");
}

std::vector<double> Config::get_doubles(const std::string& key, const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  for (auto part : split_list(it->second)) out.push_back(to_double(part, key));
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

std::vector<long> Config::get_longs(const std::string& key, const std::vector<long>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<long> out;
  for (auto part : split_list(it->second)) out.push_back(to_long(part, key));
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

void Config::require_known(std::span<const std::string_view> allowed) const {
  for (const auto& [k, v] : values_) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw ConfigError("unknown configuration key '" + k + "'");
    }
  }
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

std::uint64_t Config::hash() const { return fnv1a64(canonical()); }

}  // namespace fskjcr

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fskjcr {

/// Flat `key = value` configuration. Lines starting with '#' and blank lines
/// are ignored; list values are comma separated. Malformed input throws
/// ConfigError naming the source and line.
class Config {
 public:
  Config() = default;

  static Config parse(std::string_view text, const std::string& source = "<string>");
  static Config load(const std::filesystem::path& path);

  /// Adds or replaces a key (command-line overrides).
  void set(const std::string& key, const std::string& value);
  /// Parses a single `key=value` override.
  void set_override(std::string_view assignment);

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<long> get_longs(const std::string& key, const std::vector<long>& fallback) const;

  /// Throws ConfigError for any key outside `allowed`.
  void require_known(std::span<const std::string_view> allowed) const;

  /// Sorted `key=value` lines; the basis of hash().
  std::string canonical() const;
  /// FNV-1a 64 of canonical().
  std::uint64_t hash() const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace fskjcr

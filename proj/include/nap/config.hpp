#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nap {

/// Flat `key = value` settings. Keys are normalized to use '_' for '-'.
class Settings {
public:
  void set(std::string key, std::string value);
  bool contains(const std::string& key) const;
  const std::map<std::string, std::string>& values() const { return values_; }

  /// Typed accessors throw ConfigError naming the key on malformed values.
  std::string get_string(const std::string& key) const;
  std::optional<std::string> get_optional(const std::string& key) const;
  std::size_t get_size(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  double get_double(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  /// Comma-separated list.
  std::vector<std::string> get_list(const std::string& key) const;
  /// Like get_list; "a-b" items expand to the integers a..b.
  std::vector<std::size_t> get_size_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;

private:
  std::map<std::string, std::string> values_;
};

std::string normalize_key(std::string key);

/// Parses `key = value` lines; '#' starts a comment, blank lines are
/// ignored. Throws ConfigError with the line number on malformed lines.
Settings parse_settings(std::istream& in, const std::string& source = "config");
Settings load_settings(const std::filesystem::path& path);

}  // namespace nap

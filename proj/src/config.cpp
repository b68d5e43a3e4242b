#include "nap/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>

#include "nap/error.hpp"

namespace nap {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_integer(const std::string& key, const std::string& text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ConfigError("setting '" + key + "' expects a non-negative integer, got '" + text + "'");
  return value;
}

double parse_real(const std::string& key, const std::string& text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ConfigError("setting '" + key + "' expects a number, got '" + text + "'");
  return value;
}

}  // namespace

std::string normalize_key(std::string key) {
  std::ranges::replace(key, '-', '_');
  return key;
}

void Settings::set(std::string key, std::string value) {
  values_[normalize_key(std::move(key))] = std::move(value);
}

bool Settings::contains(const std::string& key) const { return values_.contains(key); }

std::string Settings::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing setting '" + key + "'");
  return it->second;
}

std::optional<std::string> Settings::get_optional(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end() || it->second.empty()) return std::nullopt;
  return it->second;
}

std::size_t Settings::get_size(const std::string& key) const {
  return parse_integer<std::size_t>(key, get_string(key));
}

std::uint64_t Settings::get_u64(const std::string& key) const {
  return parse_integer<std::uint64_t>(key, get_string(key));
}

double Settings::get_double(const std::string& key) const {
  return parse_real(key, get_string(key));
}

bool Settings::get_bool(const std::string& key) const {
  std::string v = get_string(key);
  std::ranges::transform(v, v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("setting '" + key + "' expects true/false, got '" + v + "'");
}

std::vector<std::string> Settings::get_list(const std::string& key) const {
  std::vector<std::string> out;
  const std::string text = get_string(key);
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    auto item = trim(std::string_view(text).substr(start, comma - start));
    if (!item.empty()) out.push_back(std::move(item));
    start = comma + 1;
  }
  return out;
}

std::vector<std::size_t> Settings::get_size_list(const std::string& key) const {
  std::vector<std::size_t> out;
  for (const auto& item : get_list(key)) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(parse_integer<std::size_t>(key, item));
      continue;
    }
    const auto lo = parse_integer<std::size_t>(key, trim(item.substr(0, dash)));
    const auto hi = parse_integer<std::size_t>(key, trim(item.substr(dash + 1)));
    if (lo > hi) throw ConfigError("setting '" + key + "' has an empty range '" + item + "'");
    for (auto k = lo; k <= hi; ++k) out.push_back(k);
  }
  return out;
}

std::vector<double> Settings::get_double_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : get_list(key)) out.push_back(parse_real(key, item));
  return out;
}

Settings parse_settings(std::istream& in, const std::string& source) {
  Settings settings;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    std::string key = trim(std::string_view(body).substr(0, eq));
    if (key.empty())
      throw ConfigError(source + ":" + std::to_string(line_no) + ": empty key");
    settings.set(std::move(key), trim(std::string_view(body).substr(eq + 1)));
  }
  return settings;
}

Settings load_settings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  return parse_settings(in, path.string());
}

}  // namespace nap

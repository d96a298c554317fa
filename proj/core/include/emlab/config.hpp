#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "emlab/system.hpp"

namespace emlab {

/// Flat `key=value` configuration. Blank lines and `#` comments are
/// ignored; whitespace around keys and values is trimmed; a repeated key
/// keeps its last value.
class Config {
 public:
  Config() = default;

  /// Throws std::invalid_argument naming the line for malformed input.
  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  void set(const std::string& key, std::string value) { entries_[key] = std::move(value); }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }
  /// Sorted `key=value` lines; parse(to_text()) reproduces the config.
  std::string to_text() const;

 private:
  std::map<std::string, std::string> entries_;
};

/// Builds a system from `system=<name>` and `param.*` keys, or from
/// `<prefix>system` when a prefix is given (used for product factors
/// `factor.1.` and `factor.2.`). Names: identity, mul_k / mul_<k>,
/// rotation, tent, logistic, cat_map, standard_map, product.
DynamicalSystem system_from_config(const Config& config, const std::string& prefix = "");

}  // namespace emlab

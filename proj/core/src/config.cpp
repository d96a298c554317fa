#include "emlab/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace emlab {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* what) {
  throw std::invalid_argument("config key '" + key + "': '" + value + "' is not " + what);
}

}  // namespace

Config Config::parse(std::string_view text) {
  Config cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
    cfg.entries_[std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) bad_value(key, it->second, "a number");
    return v;
  } catch (const std::logic_error&) {
    bad_value(key, it->second, "a number");
  }
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  std::int64_t v = 0;
  const auto& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) bad_value(key, s, "an integer");
  return v;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  std::uint64_t v = 0;
  const auto& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) bad_value(key, s, "an unsigned integer");
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const auto& s = it->second;
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  bad_value(key, s, "a boolean");
}

std::string Config::to_text() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  return out;
}

DynamicalSystem system_from_config(const Config& config, const std::string& prefix) {
  const std::string name = config.get_string(prefix + "system", "");
  if (name.empty()) throw std::invalid_argument("config lacks key '" + prefix + "system'");
  const std::string param = prefix + "param.";
  if (name == "identity") {
    return DynamicalSystem::identity(PointSpace(space_kind_from_string(config.get_string(param + "space", "unit_interval"))));
  }
  if (name == "mul_k" || name.rfind("mul_", 0) == 0) {
    std::int64_t k = 0;
    if (name == "mul_k") {
      k = config.get_int(param + "k", 2);
    } else {
      Config tmp;
      tmp.set("k", name.substr(4));
      k = tmp.get_int("k", 0);
    }
    return DynamicalSystem::mul(static_cast<int>(k));
  }
  if (name == "rotation") return DynamicalSystem::rotation(config.get_double(param + "alpha", kGoldenRotation));
  if (name == "tent") return DynamicalSystem::tent();
  if (name == "logistic") return DynamicalSystem::logistic(config.get_double(param + "a", 4.0));
  if (name == "cat_map") return DynamicalSystem::cat_map();
  if (name == "standard_map") return DynamicalSystem::standard_map(config.get_double(param + "K", 1.2));
  if (name == "product") {
    return DynamicalSystem::product(system_from_config(config, prefix + "factor.1."),
                                    system_from_config(config, prefix + "factor.2."));
  }
  throw std::invalid_argument("unknown system: " + name);
}

}  // namespace emlab

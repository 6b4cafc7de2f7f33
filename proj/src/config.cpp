#include "intervalkit/config.hpp"

#include <cstdlib>
#include <sstream>

#include "intervalkit/families.hpp"

namespace intervalkit {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

[[noreturn]] void config_fail(const std::string& what) {
  fail(ErrorCode::config_error, what);
}

double parse_double(const std::string& section, const std::string& key,
                    const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    config_fail("[" + section + "] " + key + ": '" + value +
                "' is not a number");
  }
  return v;
}

}  // namespace

ConfigFile ConfigFile::parse(std::string_view text) {
  ConfigFile cfg;
  std::string current;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        config_fail("line " + std::to_string(line_no) +
                    ": malformed section header '" + line + "'");
      }
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty()) {
        config_fail("line " + std::to_string(line_no) + ": empty section name");
      }
      if (!cfg.data_.count(current)) {
        cfg.section_order_.push_back(current);
        cfg.data_[current] = {};
      }
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      config_fail("line " + std::to_string(line_no) +
                  ": expected key = value, got '" + line + "'");
    }
    if (current.empty()) {
      config_fail("line " + std::to_string(line_no) +
                  ": key outside any [section]");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      config_fail("line " + std::to_string(line_no) + ": empty key");
    }
    for (const auto& [k, v] : cfg.data_[current]) {
      (void)v;
      if (k == key) {
        config_fail("duplicate key '" + key + "' in section [" + current + "]");
      }
    }
    cfg.data_[current].emplace_back(key, value);
  }
  return cfg;
}

bool ConfigFile::has_section(const std::string& section) const {
  return data_.count(section) > 0;
}

std::vector<std::string> ConfigFile::keys(const std::string& section) const {
  std::vector<std::string> out;
  auto it = data_.find(section);
  if (it == data_.end()) return out;
  for (const auto& [k, v] : it->second) {
    (void)v;
    out.push_back(k);
  }
  return out;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  return find(section, key).has_value();
}

std::optional<std::string> ConfigFile::find(const std::string& section,
                                            const std::string& key) const {
  auto it = data_.find(section);
  if (it == data_.end()) return std::nullopt;
  for (const auto& [k, v] : it->second) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string ConfigFile::get(const std::string& section,
                            const std::string& key) const {
  auto v = find(section, key);
  if (!v) config_fail("missing required key '" + key + "' in [" + section + "]");
  return *v;
}

std::string ConfigFile::get(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
  auto v = find(section, key);
  return v ? *v : fallback;
}

double ConfigFile::get_double(const std::string& section,
                              const std::string& key) const {
  return parse_double(section, key, get(section, key));
}

double ConfigFile::get_double(const std::string& section,
                              const std::string& key, double fallback) const {
  auto v = find(section, key);
  return v ? parse_double(section, key, *v) : fallback;
}

long long ConfigFile::get_int(const std::string& section,
                              const std::string& key,
                              long long fallback) const {
  auto v = find(section, key);
  if (!v) return fallback;
  const char* begin = v->c_str();
  char* end = nullptr;
  long long out = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0') {
    config_fail("[" + section + "] " + key + ": '" + *v +
                "' is not an integer");
  }
  return out;
}

std::uint64_t ConfigFile::get_u64(const std::string& section,
                                  const std::string& key,
                                  std::uint64_t fallback) const {
  auto v = find(section, key);
  if (!v) return fallback;
  const char* begin = v->c_str();
  char* end = nullptr;
  unsigned long long out = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0') {
    config_fail("[" + section + "] " + key + ": '" + *v +
                "' is not an unsigned integer");
  }
  return out;
}

std::vector<double> ConfigFile::get_list(
    const std::string& section, const std::string& key,
    const std::vector<double>& fallback) const {
  auto v = find(section, key);
  if (!v) return fallback;
  std::vector<double> out;
  std::istringstream ss(*v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_double(section, key, item));
  }
  if (out.empty()) {
    config_fail("[" + section + "] " + key + ": empty list");
  }
  return out;
}

MapSpec map_from_config(const ConfigFile& config) {
  if (!config.has_section("map")) {
    fail(ErrorCode::config_error, "config needs a [map] section");
  }
  std::string family = config.get("map", "family");
  std::map<std::string, double> params;
  for (const std::string& key : config.keys("map")) {
    if (key == "family") continue;
    params[key] = config.get_double("map", key);
  }
  return make_builtin(family, params);
}

}  // namespace intervalkit

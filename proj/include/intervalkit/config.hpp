#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "intervalkit/map.hpp"

namespace intervalkit {

/// Plain-text key-value config with [section] headers. Lines starting with
/// '#' or ';' are comments; duplicate keys within a section are rejected.
class ConfigFile {
 public:
  static ConfigFile parse(std::string_view text);

  const std::vector<std::string>& sections() const { return section_order_; }
  bool has_section(const std::string& section) const;
  std::vector<std::string> keys(const std::string& section) const;

  bool has(const std::string& section, const std::string& key) const;
  std::optional<std::string> find(const std::string& section,
                                  const std::string& key) const;

  // Typed getters; all raise ConfigError naming the offending key.
  std::string get(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  long long get_int(const std::string& section, const std::string& key,
                    long long fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  std::vector<double> get_list(const std::string& section,
                               const std::string& key,
                               const std::vector<double>& fallback) const;

 private:
  std::vector<std::string> section_order_;
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> data_;
};

// Builds the map named by the [map] section: `family` plus per-family numeric
// parameters.
MapSpec map_from_config(const ConfigFile& config);

}  // namespace intervalkit

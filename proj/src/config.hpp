#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "montecarlo.hpp"

namespace qkdbhd {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sectioned key-value run configuration. Parsing is strict: unknown
/// sections or keys are errors, and every physical quantity carries its unit
/// in the key name (bandwidth_mhz, repetition_mhz, lo photons_per_pulse...).
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text,
                             const std::string& name = "<string>");

  bool has(const std::string& section, const std::string& key) const;
  const std::string& get(const std::string& section,
                         const std::string& key) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double_or(const std::string& section, const std::string& key,
                       double fallback) const;

  /// Insert or overwrite one value; key names are checked against the schema.
  void set(const std::string& section, const std::string& key,
           const std::string& value);

  /// Round-trips through parse_string to an identical configuration.
  std::string serialize() const;

  /// Reject unknown sections/keys. Called by the mapping functions.
  void check_schema() const;

 private:
  struct Entry {
    std::string key;
    std::string value;
  };
  struct Section {
    std::string name;
    std::vector<Entry> entries;
  };
  std::vector<Section> sections_;

  const std::string* find(const std::string& section,
                          const std::string& key) const;
};

/// Build the analytic operating point from [modulation], [channel],
/// [receiver], [lo], [bhd], [noise] and [run].
SystemParams system_params_from_config(const Config& cfg);

/// Build the pulse-train simulator configuration from [sim] plus the shared
/// [lo], [bhd] and [run] sections. tau defaults to 1/bandwidth.
SimConfig sim_config_from_config(const Config& cfg);

}  // namespace qkdbhd

#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qkdbhd {

namespace {

// Schema: every recognized section and key. Unknown keys are rejected so a
// misspelled unit suffix cannot silently change a run.
const std::map<std::string, std::vector<std::string>>& schema() {
  static const std::map<std::string, std::vector<std::string>> s = {
      {"modulation", {"v_a"}},
      {"channel", {"transmittance", "distance_km", "loss_db_per_km"}},
      {"receiver", {"eta", "beta"}},
      {"lo", {"photons_per_pulse", "fractional_fluctuation"}},
      {"bhd",
       {"bandwidth_mhz", "cmrr_db", "delta", "t2", "r2", "g1", "g2",
        "electronic_noise_coeff", "nlo_empirical_coeff"}},
      {"noise",
       {"eps_a", "n_leak", "overlap", "eps_overlap", "nlo", "electronic",
        "n_ele"}},
      {"run", {"repetition_mhz"}},
      {"sim",
       {"tau_ns", "sample_rate_gsps", "window_ns", "n_pulses", "seed",
        "electronic_noise_rms_volts", "volts_per_photoelectron"}},
  };
  return s;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void parse_fail(const std::string& name, std::size_t line,
                             const std::string& what) {
  std::ostringstream os;
  os << name << ":" << line << ": " << what;
  throw ConfigError(os.str());
}

double to_double(const std::string& section, const std::string& key,
                 const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0') {
    throw ConfigError("config: [" + section + "] " + key + " = \"" + value +
                      "\" is not a number");
  }
  return v;
}

}  // namespace

Config Config::parse_string(const std::string& text, const std::string& name) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  Section* current = nullptr;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']')
        parse_fail(name, lineno, "unterminated section header");
      const std::string sec = trim(stripped.substr(1, stripped.size() - 2));
      if (sec.empty()) parse_fail(name, lineno, "empty section name");
      cfg.sections_.push_back({sec, {}});
      current = &cfg.sections_.back();
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      parse_fail(name, lineno, "expected key = value");
    if (!current)
      parse_fail(name, lineno, "key outside of any [section]");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) parse_fail(name, lineno, "empty key");
    for (const auto& e : current->entries)
      if (e.key == key)
        parse_fail(name, lineno,
                   "duplicate key '" + key + "' in [" + current->name + "]");
    current->entries.push_back({key, value});
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

const std::string* Config::find(const std::string& section,
                                const std::string& key) const {
  for (const auto& sec : sections_) {
    if (sec.name != section) continue;
    for (const auto& e : sec.entries)
      if (e.key == key) return &e.value;
  }
  return nullptr;
}

bool Config::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

const std::string& Config::get(const std::string& section,
                               const std::string& key) const {
  const std::string* v = find(section, key);
  if (!v)
    throw ConfigError("config: missing required key [" + section + "] " + key);
  return *v;
}

double Config::get_double(const std::string& section,
                          const std::string& key) const {
  return to_double(section, key, get(section, key));
}

double Config::get_double_or(const std::string& section,
                             const std::string& key, double fallback) const {
  const std::string* v = find(section, key);
  return v ? to_double(section, key, *v) : fallback;
}

void Config::set(const std::string& section, const std::string& key,
                 const std::string& value) {
  const auto it = schema().find(section);
  if (it == schema().end())
    throw ConfigError("config: unknown section [" + section + "]");
  if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
    throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
  for (auto& sec : sections_) {
    if (sec.name != section) continue;
    for (auto& e : sec.entries) {
      if (e.key == key) {
        e.value = value;
        return;
      }
    }
    sec.entries.push_back({key, value});
    return;
  }
  sections_.push_back({section, {{key, value}}});
}

std::string Config::serialize() const {
  std::ostringstream out;
  for (const auto& sec : sections_) {
    out << '[' << sec.name << "]\n";
    for (const auto& e : sec.entries) out << e.key << " = " << e.value << '\n';
  }
  return out.str();
}

void Config::check_schema() const {
  for (const auto& sec : sections_) {
    const auto it = schema().find(sec.name);
    if (it == schema().end())
      throw ConfigError("config: unknown section [" + sec.name + "]");
    for (const auto& e : sec.entries) {
      if (std::find(it->second.begin(), it->second.end(), e.key) ==
          it->second.end())
        throw ConfigError("config: unknown key '" + e.key + "' in [" +
                          sec.name + "]");
    }
  }
}

SystemParams system_params_from_config(const Config& cfg) {
  cfg.check_schema();
  SystemParams p;
  p.modulation.v_a = cfg.get_double("modulation", "v_a");

  const bool has_g = cfg.has("channel", "transmittance");
  const bool has_dist = cfg.has("channel", "distance_km");
  if (has_g && has_dist)
    throw ConfigError(
        "config: [channel] transmittance and distance_km are exclusive");
  if (has_dist) {
    p.channel = ChannelParams::from_distance(
        cfg.get_double("channel", "distance_km"),
        cfg.get_double("channel", "loss_db_per_km"));
  } else {
    p.channel.transmittance_g = cfg.get_double_or("channel", "transmittance", 1.0);
  }

  p.receiver.eta = cfg.get_double_or("receiver", "eta", 1.0);
  p.receiver.beta = cfg.get_double_or("receiver", "beta", 1.0);

  p.lo.photons_per_pulse = cfg.get_double_or("lo", "photons_per_pulse", 1e8);
  p.lo.fractional_fluctuation =
      cfg.get_double_or("lo", "fractional_fluctuation", 0.0);

  p.bhd.bandwidth_hz = cfg.get_double_or("bhd", "bandwidth_mhz", 100.0) * 1e6;
  const int imbalance_forms = (cfg.has("bhd", "cmrr_db") ? 1 : 0) +
                              (cfg.has("bhd", "delta") ? 1 : 0) +
                              (cfg.has("bhd", "t2") ? 1 : 0);
  if (imbalance_forms > 1)
    throw ConfigError(
        "config: [bhd] give exactly one of cmrr_db, delta, or t2/r2/g1/g2");
  if (cfg.has("bhd", "cmrr_db"))
    p.bhd.set_delta_from_cmrr(cfg.get_double("bhd", "cmrr_db"));
  else if (cfg.has("bhd", "delta"))
    p.bhd.delta = cfg.get_double("bhd", "delta");
  else if (cfg.has("bhd", "t2"))
    p.bhd.set_delta_from_splitter({cfg.get_double("bhd", "t2"),
                                   cfg.get_double("bhd", "r2"),
                                   cfg.get_double("bhd", "g1"),
                                   cfg.get_double("bhd", "g2")});
  if (cfg.has("bhd", "electronic_noise_coeff"))
    p.bhd.electronic_noise_coeff = cfg.get_double("bhd", "electronic_noise_coeff");
  if (cfg.has("bhd", "nlo_empirical_coeff"))
    p.bhd.nlo_empirical_coeff = cfg.get_double("bhd", "nlo_empirical_coeff");

  p.eps_a = cfg.get_double_or("noise", "eps_a", 0.0);
  p.n_leak = cfg.get_double_or("noise", "n_leak", 0.0);

  const std::string overlap =
      cfg.has("noise", "overlap") ? cfg.get("noise", "overlap") : "off";
  if (overlap == "off") {
    p.overlap_model = OverlapModel::none;
  } else if (overlap == "bandwidth") {
    p.overlap_model = OverlapModel::bandwidth;
  } else if (overlap == "fixed") {
    p.overlap_model = OverlapModel::fixed;
    p.eps_overlap_fixed = cfg.get_double("noise", "eps_overlap");
  } else {
    throw ConfigError("config: [noise] overlap must be off|bandwidth|fixed");
  }

  const std::string nlo = cfg.has("noise", "nlo") ? cfg.get("noise", "nlo")
                                                  : "off";
  if (nlo == "off") {
    p.nlo_model = NloModel::none;
  } else if (nlo == "physical") {
    p.nlo_model = NloModel::physical;
  } else if (nlo == "empirical") {
    p.nlo_model = NloModel::empirical;
  } else {
    throw ConfigError("config: [noise] nlo must be off|physical|empirical");
  }

  const std::string ele =
      cfg.has("noise", "electronic") ? cfg.get("noise", "electronic") : "fixed";
  if (ele == "fixed") {
    p.ele_model = EleModel::fixed;
    p.n_ele_fixed = cfg.get_double_or("noise", "n_ele", 0.0);
  } else if (ele == "coefficient") {
    p.ele_model = EleModel::coefficient;
  } else {
    throw ConfigError("config: [noise] electronic must be fixed|coefficient");
  }

  if (cfg.has("run", "repetition_mhz"))
    p.repetition_hz = cfg.get_double("run", "repetition_mhz") * 1e6;

  p.validate();
  return p;
}

SimConfig sim_config_from_config(const Config& cfg) {
  cfg.check_schema();
  SimConfig sim;
  sim.lo.photons_per_pulse = cfg.get_double_or("lo", "photons_per_pulse", 1e8);
  sim.lo.fractional_fluctuation =
      cfg.get_double_or("lo", "fractional_fluctuation", 0.0);

  if (cfg.has("bhd", "t2")) {
    sim.splitter = {cfg.get_double("bhd", "t2"), cfg.get_double("bhd", "r2"),
                    cfg.get_double("bhd", "g1"), cfg.get_double("bhd", "g2")};
  } else if (cfg.has("bhd", "delta")) {
    sim.set_delta(cfg.get_double("bhd", "delta"));
  } else if (cfg.has("bhd", "cmrr_db")) {
    sim.set_delta(delta_from_cmrr(cfg.get_double("bhd", "cmrr_db")));
  }

  const double bandwidth_hz =
      cfg.get_double_or("bhd", "bandwidth_mhz", 100.0) * 1e6;
  sim.tau_s = cfg.has("sim", "tau_ns") ? cfg.get_double("sim", "tau_ns") * 1e-9
                                       : 1.0 / bandwidth_hz;
  sim.repetition_hz = cfg.get_double_or("run", "repetition_mhz", 32.0) * 1e6;
  sim.sample_rate_hz = cfg.get_double_or("sim", "sample_rate_gsps", 20.0) * 1e9;
  sim.window_s = cfg.get_double_or("sim", "window_ns", 20.0) * 1e-9;
  sim.n_pulses = static_cast<int>(cfg.get_double_or("sim", "n_pulses", 640));
  sim.seed = cfg.has("sim", "seed")
                 ? std::strtoull(cfg.get("sim", "seed").c_str(), nullptr, 10)
                 : 1;
  sim.electronic_noise_rms_volts =
      cfg.get_double_or("sim", "electronic_noise_rms_volts", 0.0);
  sim.volts_per_photoelectron =
      cfg.get_double_or("sim", "volts_per_photoelectron", 1e-9);
  sim.validate();
  return sim;
}

}  // namespace qkdbhd

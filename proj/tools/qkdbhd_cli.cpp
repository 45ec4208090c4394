// Command-line front end for the qkdbhd library. Exit codes: 0 = success /
// positive key, 2 = valid run but no secure key (or undefined statistic),
// 1 = error.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qkdbhd.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoKey = 2;

[[noreturn]] void die(const std::string& context) {
  std::cerr << "error: " << context;
  const std::string detail = qkd_last_error();
  if (!detail.empty()) std::cerr << ": " << detail;
  std::cerr << "\n";
  std::exit(kExitError);
}

void check(qkd_status status, const std::string& context) {
  if (status != QKD_OK) die(context);
}

bool file_exists(const std::string& path) {
  std::ifstream in(path);
  return in.good();
}

// Look next to the given path, then in $QKDBHD_CONFIG_DIR.
std::string resolve_config_path(const std::string& path) {
  if (file_exists(path)) return path;
  if (const char* dir = std::getenv("QKDBHD_CONFIG_DIR")) {
    const std::string joined = std::string(dir) + "/" + path;
    if (file_exists(joined)) return joined;
    if (file_exists(joined + ".cfg")) return joined + ".cfg";
  }
  die("config file not found: " + path);
}

using ConfigPtr = std::unique_ptr<qkd_config, decltype(&qkd_config_free)>;

ConfigPtr load_config(const std::string& path,
                      const std::vector<std::string>& overrides) {
  qkd_config* raw = nullptr;
  check(qkd_config_load(resolve_config_path(path).c_str(), &raw),
        "loading " + path);
  ConfigPtr cfg(raw, &qkd_config_free);
  for (const auto& o : overrides) {
    const auto dot = o.find('.');
    const auto eq = o.find('=', dot == std::string::npos ? 0 : dot);
    if (dot == std::string::npos || eq == std::string::npos || dot > eq)
      die("override must look like section.key=value: " + o);
    check(qkd_config_set(cfg.get(), o.substr(0, dot).c_str(),
                         o.substr(dot + 1, eq - dot - 1).c_str(),
                         o.substr(eq + 1).c_str()),
          "applying override " + o);
  }
  return cfg;
}

void print_file_header(std::ostream& out, qkd_config* cfg) {
  out << "# qkdbhd version " << QKDBHD_VERSION << "\n";
  out << "# resolved configuration:\n";
  std::string serialized = qkd_config_serialize(cfg);
  std::size_t start = 0;
  while (start < serialized.size()) {
    std::size_t end = serialized.find('\n', start);
    if (end == std::string::npos) end = serialized.size();
    out << "#   " << serialized.substr(start, end - start) << "\n";
    start = end + 1;
  }
}

void print_keyrate(const qkd_keyrate_result& r, bool show_negative) {
  const double eta_g_ratio =
      r.n_ele > 0.0 && r.eps > r.eps_e ? r.n_ele / (r.eps - r.eps_e) : 0.0;
  std::printf("noise budget (shot-noise units)\n");
  std::printf("  %-14s %14s %16s\n", "component", "input-ref", "output-ref");
  auto row = [&](const char* name, double input, double output) {
    std::printf("  %-14s %14.6g %16.6g\n", name, input, output);
  };
  // eps_a / eps_overlap are defined at the input, the rest at the output.
  row("eps_a", r.eps_a, eta_g_ratio > 0.0 ? r.eps_a * eta_g_ratio : 0.0);
  row("eps_overlap", r.eps_overlap,
      eta_g_ratio > 0.0 ? r.eps_overlap * eta_g_ratio : 0.0);
  if (eta_g_ratio > 0.0) {
    row("n_lo", r.n_lo / eta_g_ratio, r.n_lo);
    row("n_leak", r.n_leak / eta_g_ratio, r.n_leak);
    row("n_ele", r.n_ele / eta_g_ratio, r.n_ele);
  } else {
    row("n_lo", 0.0, r.n_lo);
    row("n_leak", 0.0, r.n_leak);
    row("n_ele", 0.0, r.n_ele);
  }
  std::printf("\n");
  std::printf("chi            = %.6g\n", r.chi);
  std::printf("eps            = %.6g\n", r.eps);
  std::printf("eps_e          = %.6g\n", r.eps_e);
  std::printf("I_AB           = %.6g bits/pulse\n", r.i_ab);
  std::printf("I_BE           = %.6g bits/pulse\n", r.i_be);
  const double shown = show_negative ? r.delta_i : std::max(0.0, r.delta_i);
  std::printf("delta_I        = %.6g bits/pulse%s\n", shown,
              !show_negative && r.delta_i < 0.0 ? " (clamped, no secure key)"
                                                : "");
  if (r.delta_i_per_second != 0.0 || r.delta_i == 0.0) {
    const double per_s = show_negative ? r.delta_i_per_second
                                       : std::max(0.0, r.delta_i_per_second);
    std::printf("delta_I/s      = %.6g bits/s\n", per_s);
  }
}

void write_svg_plot(const std::string& path, qkd_sweep* sweep,
                    const std::string& x_label, const std::string& y_label,
                    bool per_second) {
  const size_t n = qkd_sweep_size(sweep);
  std::vector<double> xs(n), ys(n);
  double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
  for (size_t i = 0; i < n; ++i) {
    qkd_keyrate_result r;
    check(qkd_sweep_point(sweep, i, &xs[i], &r), "reading sweep point");
    ys[i] = per_second ? r.delta_i_per_second : r.delta_i;
    if (i == 0) {
      x_min = x_max = xs[i];
      y_min = y_max = ys[i];
    }
    x_min = std::min(x_min, xs[i]);
    x_max = std::max(x_max, xs[i]);
    y_min = std::min(y_min, ys[i]);
    y_max = std::max(y_max, ys[i]);
  }
  if (x_max == x_min || y_max == y_min) return;
  const double w = 720, h = 480, ml = 70, mr = 20, mt = 20, mb = 50;
  auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * (w - ml - mr); };
  auto py = [&](double y) { return h - mb - (y - y_min) / (y_max - y_min) * (h - mt - mb); };

  std::ofstream out(path);
  if (!out) die("cannot open plot file " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w
      << "' height='" << h << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr
      << "' y2='" << h - mb << "' stroke='black'/>\n";
  out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='"
      << h - mb << "' stroke='black'/>\n";
  if (y_min < 0.0 && y_max > 0.0)
    out << "<line x1='" << ml << "' y1='" << py(0.0) << "' x2='" << w - mr
        << "' y2='" << py(0.0) << "' stroke='#bbbbbb' stroke-dasharray='4'/>\n";
  out << "<polyline fill='none' stroke='#1f77b4' stroke-width='1.5' points='";
  for (size_t i = 0; i < n; ++i) out << px(xs[i]) << ',' << py(ys[i]) << ' ';
  out << "'/>\n";
  out << "<text x='" << (ml + w - mr) / 2 << "' y='" << h - 12
      << "' text-anchor='middle' font-size='14'>" << x_label << "</text>\n";
  out << "<text x='16' y='" << (mt + h - mb) / 2
      << "' text-anchor='middle' font-size='14' transform='rotate(-90 16 "
      << (mt + h - mb) / 2 << ")'>" << y_label << "</text>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double xv = x_min + (x_max - x_min) * tick / 4.0;
    const double yv = y_min + (y_max - y_min) * tick / 4.0;
    out << "<text x='" << px(xv) << "' y='" << h - mb + 18
        << "' text-anchor='middle' font-size='11'>" << xv << "</text>\n";
    out << "<text x='" << ml - 6 << "' y='" << py(yv) + 4
        << "' text-anchor='end' font-size='11'>" << yv << "</text>\n";
  }
  out << "</svg>\n";
}

int cmd_keyrate(const std::string& config_path,
                const std::vector<std::string>& overrides, bool show_negative) {
  ConfigPtr cfg = load_config(config_path, overrides);
  qkd_keyrate_result result;
  check(qkd_keyrate(cfg.get(), &result), "computing key rate");
  print_keyrate(result, show_negative);
  return result.delta_i > 0.0 ? kExitOk : kExitNoKey;
}

struct AxisInfo {
  qkd_sweep_axis axis;
  double scale;       // CLI unit -> API unit
  const char* unit;
  double def_min, def_max;  // in CLI units
  bool per_second;
};

int cmd_sweep(const std::string& axis_name, const std::string& config_path,
              const std::vector<std::string>& overrides, double min_value,
              double max_value, int points, const std::string& output,
              const std::string& plot) {
  AxisInfo info;
  if (axis_name == "repetition") {
    info = {QKD_SWEEP_REPETITION, 1e6, "MHz", 1.0, 60.0, true};
  } else if (axis_name == "cmrr") {
    info = {QKD_SWEEP_CMRR, 1.0, "dB", 30.0, 70.0, false};
  } else if (axis_name == "lo") {
    info = {QKD_SWEEP_LO, 1.0, "photons", 1e6, 1e10, false};
  } else if (axis_name == "distance") {
    info = {QKD_SWEEP_DISTANCE, 1.0, "km", 0.1, 25.0, true};
  } else {
    die("unknown sweep axis '" + axis_name +
        "' (expected repetition|cmrr|lo|distance)");
  }
  if (std::isnan(min_value)) min_value = info.def_min;
  if (std::isnan(max_value)) max_value = info.def_max;
  if (!(max_value > min_value)) die("empty sweep range");

  ConfigPtr cfg = load_config(config_path, overrides);
  qkd_sweep* sweep = nullptr;
  check(qkd_sweep_run(cfg.get(), info.axis, min_value * info.scale,
                      max_value * info.scale, points, &sweep),
        "running " + axis_name + " sweep");
  std::unique_ptr<qkd_sweep, decltype(&qkd_sweep_free)> guard(sweep,
                                                              &qkd_sweep_free);

  double x_max;
  qkd_keyrate_result best;
  check(qkd_sweep_argmax(sweep, &x_max, &best), "reading argmax");
  std::printf("argmax: %s = %.6g %s, delta_I = %.6g bits/pulse",
              axis_name.c_str(),
              x_max / info.scale, info.unit, best.delta_i);
  if (info.per_second)
    std::printf(", delta_I/s = %.6g bits/s", best.delta_i_per_second);
  std::printf("\n");

  std::vector<double> crossings(16);
  const size_t n_cross =
      qkd_sweep_zero_crossings(sweep, crossings.data(), crossings.size());
  for (size_t i = 0; i < n_cross && i < crossings.size(); ++i)
    std::printf("zero crossing: %s = %.6g %s\n", axis_name.c_str(),
                crossings[i] / info.scale, info.unit);

  if (!output.empty())
    check(qkd_sweep_write(sweep, output.c_str(), cfg.get()),
          "writing " + output);
  if (!plot.empty())
    write_svg_plot(plot, sweep, axis_name + std::string(" [") + info.unit + "]",
                   info.per_second ? "delta_I per second [bits/s]"
                                   : "delta_I [bits/pulse]",
                   info.per_second);

  const double best_obj =
      info.per_second ? best.delta_i_per_second : best.delta_i;
  return best_obj > 0.0 ? kExitOk : kExitNoKey;
}

int cmd_optimize_lo(const std::string& config_path,
                    const std::vector<std::string>& overrides, double lo_min,
                    double lo_max) {
  ConfigPtr cfg = load_config(config_path, overrides);
  double lo_opt = 0.0;
  qkd_keyrate_result result;
  int monotone = 0;
  check(qkd_optimize_lo(cfg.get(), lo_min, lo_max, &lo_opt, &result, &monotone),
        "optimizing LO level");
  std::printf("optimal LO photons/pulse = %.6g%s\n", lo_opt,
              monotone ? " (objective monotone; range boundary)" : "");
  std::printf("delta_I at optimum       = %.6g bits/pulse\n", result.delta_i);
  if (result.delta_i_per_second != 0.0)
    std::printf("delta_I/s at optimum     = %.6g bits/s\n",
                result.delta_i_per_second);
  return result.delta_i > 0.0 ? kExitOk : kExitNoKey;
}

int cmd_montecarlo(const std::string& config_path,
                   const std::vector<std::string>& overrides,
                   std::uint64_t seed, double lo_min, double lo_max,
                   int n_levels, const std::string& output,
                   const std::string& trace_path) {
  ConfigPtr cfg = load_config(config_path, overrides);
  qkd_sim_params sim;
  check(qkd_sim_params_resolve(cfg.get(), &sim), "resolving sim parameters");

  if (std::isnan(lo_max)) lo_max = sim.lo_photons_per_pulse;
  if (std::isnan(lo_min)) lo_min = lo_max / 10.0;
  if (!(lo_max > lo_min && lo_min > 0.0)) die("invalid LO scan range");

  std::vector<double> levels(static_cast<size_t>(n_levels));
  for (int i = 0; i < n_levels; ++i)
    levels[static_cast<size_t>(i)] =
        lo_min * std::pow(lo_max / lo_min, double(i) / (n_levels - 1));
  std::vector<double> variances(levels.size());
  check(qkd_mc_noise_scan(cfg.get(), seed, levels.data(), levels.size(),
                          variances.data()),
        "running noise scan");

  qkd_quadratic_fit fit;
  check(qkd_fit_quadratic(levels.data(), variances.data(), levels.size(), &fit),
        "fitting variance curve");
  double c_ele = 0.0, c_lo = 0.0;
  check(qkd_decompose_noise(&fit, &c_ele, &c_lo), "decomposing noise terms");

  // Analytic expectations for the configured simulator. The window captures
  // only erf(w / (2 sqrt(2) tau)) of each Gaussian pulse area.
  const double capture =
      std::erf(sim.window_s / (2.0 * std::sqrt(2.0) * sim.tau_s));
  const double area = sim.volts_per_photoelectron * std::sqrt(2.0 * M_PI) *
                      sim.tau_s * capture;  // V*s collected per photoelectron
  const double shot_scale = sim.g1 * sim.g1 * sim.t2 + sim.g2 * sim.g2 * sim.r2;
  const double b_pred = area * area * shot_scale;
  const double f = sim.lo_fractional_fluctuation;
  const double a_pred = b_pred * f * f * sim.delta * sim.delta;
  const double dt = 1.0 / sim.sample_rate_hz;
  const double window_samples = std::round(sim.window_s / dt);
  const double c_pred = window_samples * sim.electronic_noise_rms_volts *
                        sim.electronic_noise_rms_volts * dt * dt;

  std::printf("variance fit: y = %.6g*I_LO^2 + %.6g*I_LO + %.6g (R^2 = %.6f)\n",
              fit.a, fit.b, fit.c, fit.r_squared);
  std::printf("analytic:     y = %.6g*I_LO^2 + %.6g*I_LO + %.6g\n", a_pred,
              b_pred, c_pred);
  std::printf("decomposition: c_ele = %.6g (N_ele = c_ele/I_LO), c_lo = %.6g "
              "(N_LO = c_lo*I_LO)\n",
              c_ele, c_lo);
  std::printf("analytic:      c_ele = %.6g, c_lo = %.6g\n", c_pred / b_pred,
              f * f * sim.delta * sim.delta);
  const double top_lo = levels.back();
  const double n_ele_top = c_ele / top_lo;
  if (n_ele_top > 0.0)
    std::printf("shot/electronic ratio at I_LO = %.3g: %.2f dB\n", top_lo,
                10.0 * std::log10(1.0 / n_ele_top));

  if (!output.empty()) {
    std::ofstream out(output);
    if (!out) die("cannot open " + output);
    print_file_header(out, cfg.get());
    out << "lo_photons_per_pulse,variance_v2s2\n";
    out.precision(12);
    for (size_t i = 0; i < levels.size(); ++i)
      out << levels[i] << ',' << variances[i] << '\n';
  }
  if (!trace_path.empty()) {
    qkd_trace* trace = nullptr;
    check(qkd_mc_simulate(cfg.get(), seed, &trace), "simulating trace");
    check(qkd_trace_save(trace, trace_path.c_str()), "writing " + trace_path);
    qkd_trace_free(trace);
  }
  return kExitOk;
}

int cmd_cc(const std::string& config_path,
           const std::vector<std::string>& overrides,
           const std::string& trace_path, double repetition_mhz,
           double window_ns, double v_a, std::uint64_t seed) {
  qkd_trace* raw = nullptr;
  double window_s = window_ns * 1e-9;
  ConfigPtr cfg(nullptr, &qkd_config_free);
  if (!trace_path.empty()) {
    if (!(repetition_mhz > 0.0))
      die("--repetition-mhz is required with --trace");
    check(qkd_trace_load(trace_path.c_str(), repetition_mhz * 1e6, &raw),
          "loading " + trace_path);
  } else if (!config_path.empty()) {
    cfg = load_config(config_path, overrides);
    qkd_sim_params sim;
    check(qkd_sim_params_resolve(cfg.get(), &sim), "resolving sim parameters");
    if (std::isnan(window_s)) window_s = sim.window_s;
    check(qkd_mc_simulate(cfg.get(), seed, &raw), "simulating trace");
    if (const char* va_str = qkd_config_get(cfg.get(), "modulation", "v_a");
        va_str && std::isnan(v_a))
      v_a = std::strtod(va_str, nullptr);
  } else {
    die("cc needs either --config or --trace");
  }
  std::unique_ptr<qkd_trace, decltype(&qkd_trace_free)> trace(raw,
                                                              &qkd_trace_free);
  if (std::isnan(window_s)) die("--window-ns is required with --trace");

  double cc = 0.0;
  const qkd_status status = qkd_trace_cc(trace.get(), window_s, &cc);
  if (status == QKD_ERR_DEGENERATE) {
    std::printf("undefined CC: %s\n", qkd_last_error());
    return kExitNoKey;
  }
  check(status, "computing correlation coefficient");
  std::printf("pulses       = %zu\n", qkd_trace_n_pulses(trace.get()));
  std::printf("lag-1 CC     = %.6g\n", cc);
  if (!std::isnan(v_a)) {
    double bound1 = 0.0, bound2 = 0.0;
    check(qkd_overlap_noise_from_cc(v_a, cc, 1, &bound1), "overlap bound");
    check(qkd_overlap_noise_from_cc(v_a, cc, 2, &bound2), "overlap bound");
    std::printf("eps_overlap bound (1 neighbor)  = %.6g\n", bound1);
    std::printf("eps_overlap bound (2 neighbors) = %.6g\n", bound2);
  }
  return kExitOk;
}

int cmd_fit(const std::string& input, const std::string& output) {
  std::ifstream in(input);
  if (!in) die("cannot open " + input);
  std::vector<double> xs, ys;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    double x, y;
    // accept space-, tab- or comma-separated columns
    for (char& ch : line)
      if (ch == ',') ch = ' ';
    if (std::sscanf(line.c_str(), "%lf %lf", &x, &y) != 2)
      die(input + ":" + std::to_string(lineno) +
          ": expected two numeric columns");
    xs.push_back(x);
    ys.push_back(y);
  }
  qkd_quadratic_fit fit;
  check(qkd_fit_quadratic(xs.data(), ys.data(), xs.size(), &fit),
        "fitting " + input);
  std::printf("y = a*x^2 + b*x + c\n");
  std::printf("a = %.9g (se %.3g)\n", fit.a, fit.se_a);
  std::printf("b = %.9g (se %.3g)\n", fit.b, fit.se_b);
  std::printf("c = %.9g (se %.3g)\n", fit.c, fit.se_c);
  std::printf("R^2 = %.9g\n", fit.r_squared);
  if (!output.empty()) {
    std::ofstream out(output);
    if (!out) die("cannot open " + output);
    out << "# qkdbhd version " << QKDBHD_VERSION << "\n";
    out << "# input: " << input << "\n";
    out << "coefficient,value,standard_error\n";
    out.precision(12);
    out << "a," << fit.a << ',' << fit.se_a << '\n';
    out << "b," << fit.b << ',' << fit.se_b << '\n';
    out << "c," << fit.c << ',' << fit.se_c << '\n';
    out << "r_squared," << fit.r_squared << ",\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GMCS QKD balanced-homodyne-detector noise model and key-rate "
               "calculator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", QKDBHD_VERSION);

  std::string config_path, output, plot, trace_path, fit_input;
  std::vector<std::string> overrides;
  bool show_negative = false;
  double min_value = NAN, max_value = NAN;
  int points = 200, levels = 10;
  double lo_min = 1e6, lo_max = 1e10;
  double mc_lo_min = NAN, mc_lo_max = NAN;
  double repetition_mhz = 0.0, window_ns = NAN, v_a = NAN;
  std::uint64_t seed = 0;
  std::string axis;

  auto add_config = [&](CLI::App* cmd, bool required = true) {
    auto* opt = cmd->add_option("-c,--config", config_path,
                                "run configuration file (searched in "
                                "$QKDBHD_CONFIG_DIR if not found directly)");
    if (required) opt->required();
    cmd->add_option("--set", overrides,
                    "override a config value, section.key=value");
  };

  auto* keyrate = app.add_subcommand("keyrate", "compute the secret key rate");
  add_config(keyrate);
  keyrate->add_flag("--show-negative", show_negative,
                    "print raw (possibly negative) key rates");

  auto* sweep = app.add_subcommand(
      "sweep", "sweep one axis: repetition | cmrr | lo | distance");
  sweep->add_option("axis", axis, "sweep axis")->required();
  add_config(sweep);
  sweep->add_option("--min", min_value, "axis minimum (MHz/dB/photons/km)");
  sweep->add_option("--max", max_value, "axis maximum");
  sweep->add_option("-n,--points", points, "grid points")->check(CLI::Range(2, 100000));
  sweep->add_option("-o,--output", output, "write sweep data file");
  sweep->add_option("--plot", plot, "write an SVG plot of the curve");

  auto* opt_lo = app.add_subcommand("optimize-lo",
                                    "maximize the key rate over the LO level");
  add_config(opt_lo);
  opt_lo->add_option("--min", lo_min, "LO search minimum, photons/pulse");
  opt_lo->add_option("--max", lo_max, "LO search maximum, photons/pulse");

  auto* mc = app.add_subcommand(
      "montecarlo", "simulate the pulse train and decompose the noise");
  add_config(mc);
  mc->add_option("--seed", seed, "override the config RNG seed");
  mc->add_option("--lo-min", mc_lo_min, "lowest LO level of the scan");
  mc->add_option("--lo-max", mc_lo_max, "highest LO level of the scan");
  mc->add_option("--levels", levels, "number of LO levels")
      ->check(CLI::Range(3, 1000));
  mc->add_option("-o,--output", output, "write variance-vs-LO data file");
  mc->add_option("--trace", trace_path, "also write one raw trace");

  auto* cc = app.add_subcommand(
      "cc", "lag-1 correlation of pulse quadratures and the overlap bound");
  add_config(cc, /*required=*/false);
  cc->add_option("--trace", trace_path, "analyze an existing trace file");
  cc->add_option("--repetition-mhz", repetition_mhz,
                 "pulse repetition rate of the trace");
  cc->add_option("--window-ns", window_ns, "integration window");
  cc->add_option("--v-a", v_a, "modulation variance for the overlap bound");
  cc->add_option("--seed", seed, "override the config RNG seed");

  auto* fit = app.add_subcommand("fit", "quadratic fit of a two-column file");
  fit->add_option("input", fit_input, "two-column data file")->required();
  fit->add_option("-o,--output", output, "write fit report file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (keyrate->parsed())
      return cmd_keyrate(config_path, overrides, show_negative);
    if (sweep->parsed())
      return cmd_sweep(axis, config_path, overrides, min_value, max_value,
                       points, output, plot);
    if (opt_lo->parsed())
      return cmd_optimize_lo(config_path, overrides, lo_min, lo_max);
    if (mc->parsed())
      return cmd_montecarlo(config_path, overrides, seed, mc_lo_min, mc_lo_max,
                            levels, output, trace_path);
    if (cc->parsed())
      return cmd_cc(config_path, overrides, trace_path, repetition_mhz,
                    window_ns, v_a, seed);
    if (fit->parsed()) return cmd_fit(fit_input, output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

#include "montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace qkdbhd {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// Stateless mix for deriving independent per-task streams from (seed, index).
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::size_t period_samples(const SimConfig& cfg) {
  return static_cast<std::size_t>(
      std::llround(cfg.sample_rate_hz / cfg.repetition_hz));
}

std::size_t window_samples(const PulseTrace& trace, double window_s) {
  require(window_s > 0.0, "integrate_quadratures: window must be > 0");
  auto m = static_cast<std::size_t>(std::llround(window_s / trace.sample_period_s));
  require(m >= 2, "integrate_quadratures: window must span >= 2 samples");
  return m;
}

// Photoelectron count for one diode; Gaussian approximation above 1e4 mean.
double draw_count(double mean, std::mt19937_64& rng) {
  if (mean <= 0.0) return 0.0;
  if (mean < 1e4) {
    std::poisson_distribution<long long> poisson(mean);
    return static_cast<double>(poisson(rng));
  }
  std::normal_distribution<double> normal(mean, std::sqrt(mean));
  return normal(rng);
}

}  // namespace

void SimConfig::set_delta(double delta) {
  require(std::abs(delta) < 1.0, "sim: |delta| must be < 1");
  splitter = SplitterGains{(1.0 + delta) / 2.0, (1.0 - delta) / 2.0, 1.0, 1.0};
}

void SimConfig::validate() const {
  // Unlike the analytic model, the simulator accepts a dark (zero-photon) LO
  // so electronic noise can be measured on its own.
  require(lo.photons_per_pulse >= 0.0, "sim: photons_per_pulse must be >= 0");
  require(lo.fractional_fluctuation >= 0.0,
          "sim: fractional_fluctuation must be >= 0");
  require(tau_s > 0.0, "sim: tau must be > 0");
  require(repetition_hz > 0.0, "sim: repetition rate must be > 0");
  require(sample_rate_hz > 0.0, "sim: sample rate must be > 0");
  require(n_pulses >= 2, "sim: n_pulses must be >= 2");
  require(window_s * sample_rate_hz >= 2.0,
          "sim: window must span >= 2 samples");
  require(window_s <= 1.0 / repetition_hz + 1e-15,
          "sim: window must not exceed the repetition period");
  require(electronic_noise_rms_volts >= 0.0,
          "sim: electronic noise rms must be >= 0");
  require(volts_per_photoelectron > 0.0,
          "sim: volts_per_photoelectron must be > 0");
  // Gaussian LO fluctuation is truncated at zero intensity; beyond f ~ 0.2
  // the truncation biases the mean by more than 1e-6 relative.
  require(lo.fractional_fluctuation <= 0.2,
          "sim: fractional_fluctuation > 0.2 would bias the truncated "
          "LO distribution");
  imbalance_delta(splitter);  // validates the tuple
}

void PulseTrace::validate() const {
  require(sample_period_s > 0.0, "trace: sample period must be > 0");
  for (std::size_t i = 1; i < pulse_starts.size(); ++i)
    require(pulse_starts[i] > pulse_starts[i - 1],
            "trace: pulse starts must be strictly increasing");
  if (!pulse_starts.empty())
    require(pulse_starts.back() < samples.size(),
            "trace: pulse start beyond trace end");
}

PulseTrace simulate_trace(const SimConfig& cfg) {
  cfg.validate();
  const std::size_t period = period_samples(cfg);
  require(period >= 2, "sim: sample rate too low for the repetition rate");

  const double dt = 1.0 / cfg.sample_rate_hz;
  const std::size_t n = static_cast<std::size_t>(cfg.n_pulses);
  PulseTrace trace;
  trace.sample_period_s = dt;
  trace.samples.assign(n * period, 0.0);
  trace.pulse_starts.resize(n);
  for (std::size_t k = 0; k < n; ++k) trace.pulse_starts[k] = k * period;

  std::mt19937_64 rng(splitmix64(cfg.seed));
  std::normal_distribution<double> unit_normal(0.0, 1.0);

  const double f = cfg.lo.fractional_fluctuation;
  const auto& sg = cfg.splitter;

  // Render each pulse out to +-8 tau; tails beyond that are below 1e-13.
  const auto half_extent =
      static_cast<std::ptrdiff_t>(std::ceil(8.0 * cfg.tau_s / dt));

  for (std::size_t k = 0; k < n; ++k) {
    double intensity = cfg.lo.photons_per_pulse;
    if (f > 0.0 && intensity > 0.0) {
      double g;
      do {
        g = unit_normal(rng);
      } while (cfg.lo.photons_per_pulse * (1.0 + f * g) <= 0.0);
      intensity *= 1.0 + f * g;
    }
    const double n1 = draw_count(intensity * sg.t2, rng);
    const double n2 = draw_count(intensity * sg.r2, rng);
    const double diff = sg.g1 * n1 - sg.g2 * n2;
    const double peak = diff * cfg.volts_per_photoelectron;

    const double center = (static_cast<double>(k) + 0.5) * static_cast<double>(period);
    const auto c = static_cast<std::ptrdiff_t>(std::llround(center));
    const auto lo_i = std::max<std::ptrdiff_t>(0, c - half_extent);
    const auto hi_i = std::min<std::ptrdiff_t>(
        static_cast<std::ptrdiff_t>(trace.samples.size()) - 1, c + half_extent);
    const double inv_2tau2 = 1.0 / (2.0 * cfg.tau_s * cfg.tau_s);
    for (std::ptrdiff_t i = lo_i; i <= hi_i; ++i) {
      const double t = (static_cast<double>(i) - center) * dt;
      trace.samples[static_cast<std::size_t>(i)] +=
          peak * std::exp(-t * t * inv_2tau2);
    }
  }

  if (cfg.electronic_noise_rms_volts > 0.0) {
    std::normal_distribution<double> ele(0.0, cfg.electronic_noise_rms_volts);
    for (double& v : trace.samples) v += ele(rng);
  }
  return trace;
}

QuadratureSeries integrate_quadratures(const PulseTrace& trace,
                                       double window_s) {
  trace.validate();
  const std::size_t m = window_samples(trace, window_s);
  const std::size_t period = trace.pulse_starts.size() > 1
                                 ? trace.pulse_starts[1] - trace.pulse_starts[0]
                                 : trace.samples.size();
  require(m <= period, "integrate_quadratures: window exceeds pulse period");

  QuadratureSeries series;
  series.values.reserve(trace.pulse_starts.size());
  for (const std::size_t start : trace.pulse_starts) {
    const std::size_t begin = start + (period - m) / 2;  // centered window
    require(begin + m <= trace.samples.size(),
            "integrate_quadratures: window out of trace bounds");
    double sum = 0.0;
    for (std::size_t i = begin; i < begin + m; ++i) sum += trace.samples[i];
    series.values.push_back(sum * trace.sample_period_s);
  }
  return series;
}

QuadratureSeries peak_quadratures(const PulseTrace& trace, double window_s) {
  trace.validate();
  const std::size_t m = window_samples(trace, window_s);
  const std::size_t period = trace.pulse_starts.size() > 1
                                 ? trace.pulse_starts[1] - trace.pulse_starts[0]
                                 : trace.samples.size();
  require(m <= period, "peak_quadratures: window exceeds pulse period");

  QuadratureSeries series;
  series.values.reserve(trace.pulse_starts.size());
  for (const std::size_t start : trace.pulse_starts) {
    const std::size_t begin = start + (period - m) / 2;
    require(begin + m <= trace.samples.size(),
            "peak_quadratures: window out of trace bounds");
    double peak = 0.0;
    for (std::size_t i = begin; i < begin + m; ++i)
      if (std::abs(trace.samples[i]) > std::abs(peak)) peak = trace.samples[i];
    series.values.push_back(peak);
  }
  return series;
}

bool correlation_coefficient(const QuadratureSeries& series, double& cc) {
  const auto& x = series.values;
  require(x.size() >= 3, "correlation_coefficient: need at least 3 values");
  const std::size_t n = x.size() - 1;

  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += x[i];
    mean_b += x[i + 1];
  }
  mean_a /= static_cast<double>(n);
  mean_b /= static_cast<double>(n);

  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = x[i] - mean_a;
    const double db = x[i + 1] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a <= 0.0 || var_b <= 0.0) return false;
  cc = cov / (std::sqrt(var_a) * std::sqrt(var_b));
  cc = std::clamp(cc, -1.0, 1.0);
  return true;
}

double series_variance(const QuadratureSeries& series) {
  const auto& x = series.values;
  require(x.size() >= 2, "series_variance: need at least 2 values");
  double mean = 0.0;
  for (const double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (const double v : x) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(x.size() - 1);
}

std::vector<std::pair<double, double>> noise_vs_lo_scan(
    const SimConfig& cfg, const std::vector<double>& lo_levels) {
  require(lo_levels.size() >= 3, "noise_vs_lo_scan: need >= 3 LO levels");
  std::vector<std::pair<double, double>> out;
  out.reserve(lo_levels.size());
  for (std::size_t i = 0; i < lo_levels.size(); ++i) {
    SimConfig level_cfg = cfg;
    level_cfg.lo.photons_per_pulse = lo_levels[i];
    level_cfg.seed = splitmix64(cfg.seed ^ (0x5151000000000000ULL + i));
    const PulseTrace trace = simulate_trace(level_cfg);
    const QuadratureSeries q = integrate_quadratures(trace, cfg.window_s);
    out.emplace_back(lo_levels[i], series_variance(q));
  }
  return out;
}

void save_trace(const PulseTrace& trace, const std::string& path) {
  trace.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_trace: cannot open " + path);
  out << "# time_seconds volts\n";
  out.precision(12);
  for (std::size_t i = 0; i < trace.samples.size(); ++i)
    out << static_cast<double>(i) * trace.sample_period_s << ' '
        << trace.samples[i] << '\n';
}

PulseTrace load_trace(const std::string& path, double repetition_hz) {
  require(repetition_hz > 0.0, "load_trace: repetition rate must be > 0");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_trace: cannot open " + path);

  PulseTrace trace;
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> times;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    double t, v;
    if (!(row >> t >> v)) {
      std::ostringstream os;
      os << "load_trace: " << path << ":" << lineno
         << ": expected two numeric columns";
      throw std::runtime_error(os.str());
    }
    times.push_back(t);
    trace.samples.push_back(v);
  }
  require(trace.samples.size() >= 4, "load_trace: trace too short");
  trace.sample_period_s = (times.back() - times.front()) /
                          static_cast<double>(times.size() - 1);
  require(trace.sample_period_s > 0.0, "load_trace: non-increasing time axis");

  const auto period = static_cast<std::size_t>(
      std::llround(1.0 / (repetition_hz * trace.sample_period_s)));
  require(period >= 2 && period <= trace.samples.size(),
          "load_trace: repetition period outside trace");
  for (std::size_t start = 0; start + period <= trace.samples.size();
       start += period)
    trace.pulse_starts.push_back(start);
  trace.validate();
  return trace;
}

}  // namespace qkdbhd

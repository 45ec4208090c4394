#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "model.hpp"

namespace qkdbhd {

/// How the per-pulse quadrature is read out of the voltage trace.
enum class Readout { window_integral, peak };

/// Configuration of one pulsed-BHD simulation run.
struct SimConfig {
  LoParams lo;
  SplitterGains splitter;          // arm imbalance; use set_delta for a pure delta
  double tau_s = 10e-9;            // Gaussian electrical pulse width, ~1/B
  double repetition_hz = 32e6;
  double sample_rate_hz = 20e9;
  double window_s = 20e-9;         // integration window per pulse
  int n_pulses = 640;
  std::uint64_t seed = 1;
  double electronic_noise_rms_volts = 0.0;  // additive white noise per sample
  double volts_per_photoelectron = 1e-9;    // peak volts per unit difference signal

  /// Configure a pure optical imbalance: t^2 = (1+delta)/2, r^2 = (1-delta)/2,
  /// unit gains, so that imbalance_delta(splitter) == delta exactly.
  void set_delta(double delta);
  double delta() const { return imbalance_delta(splitter); }
  void validate() const;
};

/// Sampled BHD output voltage with per-pulse window metadata.
struct PulseTrace {
  double sample_period_s = 0.0;
  std::vector<double> samples;
  std::vector<std::size_t> pulse_starts;  // first sample of each pulse period

  void validate() const;
};

/// One integrated quadrature value per pulse (V*s).
struct QuadratureSeries {
  std::vector<double> values;

  std::size_t n() const { return values.size(); }
};

/// Simulate a pulse train: per pulse, draw the LO intensity with relative
/// fluctuation f (Gaussian, truncated positive), Poisson photoelectron counts
/// in each arm, form the gain-weighted difference, render it as a Gaussian
/// voltage pulse centered in its window (tails superpose into neighboring
/// windows) and add white electronic noise. Deterministic given the seed.
PulseTrace simulate_trace(const SimConfig& cfg);

/// Window integral of each pulse: sum of window samples times the sample
/// period. window_s <= repetition period; must fit inside the trace.
QuadratureSeries integrate_quadratures(const PulseTrace& trace, double window_s);

/// Peak readout: maximum-magnitude sample in each window (signed, volts).
QuadratureSeries peak_quadratures(const PulseTrace& trace, double window_s);

/// Lag-1 Pearson correlation between consecutive quadratures. Returns false
/// when either subsequence is degenerate (zero variance).
bool correlation_coefficient(const QuadratureSeries& series, double& cc);

/// Unbiased sample variance of a quadrature series.
double series_variance(const QuadratureSeries& series);

/// Variance of the quadrature series at each LO level. The RNG stream is
/// derived per level from (cfg.seed, level index), so parallel and serial
/// execution agree.
std::vector<std::pair<double, double>> noise_vs_lo_scan(
    const SimConfig& cfg, const std::vector<double>& lo_levels);

/// Two-column text (time_seconds volts) with a one-line header; '#' comments.
void save_trace(const PulseTrace& trace, const std::string& path);
PulseTrace load_trace(const std::string& path, double repetition_hz);

}  // namespace qkdbhd

#pragma once

#include <string>
#include <vector>

#include "keyrate.hpp"

namespace qkdbhd {

/// Least-squares fit of y = a x^2 + b x + c.
struct QuadraticFit {
  double a = 0.0, b = 0.0, c = 0.0;
  double se_a = 0.0, se_b = 0.0, se_c = 0.0;  // per-coefficient standard errors
  double r_squared = 0.0;
};

QuadraticFit fit_quadratic(const std::vector<std::pair<double, double>>& points);

/// Split a variance-vs-LO fit into noise coefficients by term ratios:
/// c_ele = c/b (N_ele = c_ele/I_LO) and c_lo = a/b (N_LO = c_lo * I_LO).
struct NoiseCoefficients {
  double c_ele;
  double c_lo;
};
NoiseCoefficients decompose_noise(const QuadraticFit& fit);

/// One swept axis with the key-rate result at each grid point.
struct SweepResult {
  std::string axis;  // e.g. "repetition_hz"
  std::string unit;
  std::vector<std::pair<double, KeyRateResult>> points;  // sorted by x
  std::size_t argmax = 0;               // index of max objective
  std::vector<double> zero_crossings;   // bisected roots of the objective
  bool per_second = false;              // objective: delta_i_per_second vs delta_i

  double objective(std::size_t i) const {
    return per_second ? points[i].second.delta_i_per_second
                      : points[i].second.delta_i;
  }
};

/// Key rate per second vs laser repetition rate; pulse-overlap noise is
/// recomputed from the BHD bandwidth at every grid point.
SweepResult sweep_repetition(const SystemParams& params, double r_min_hz,
                             double r_max_hz, int n_points = 200);

/// Key rate per pulse vs CMRR; at each point delta comes from the CMRR and
/// N_LO from the physical LO-fluctuation formula.
SweepResult sweep_cmrr(const SystemParams& params, double cmrr_min_db,
                       double cmrr_max_db, int n_points = 200);

/// Key rate per pulse vs LO photon number (log-spaced grid); N_LO and N_ele
/// follow the configured empirical coefficients.
SweepResult sweep_lo(const SystemParams& params, double lo_min, double lo_max,
                     int n_points = 200);

/// Key rate per second vs fiber distance at fixed repetition rate, with the
/// LO level re-optimized at every distance.
SweepResult sweep_distance(const SystemParams& params, double km_min,
                           double km_max, double loss_db_per_km,
                           int n_points = 200);

struct LoOptimum {
  double lo_photons;
  KeyRateResult result;
  bool monotone = false;  // objective had no interior maximum; boundary returned
};

/// Maximize delta_i over the LO photon number: coarse log-spaced bracket
/// followed by golden-section refinement to relative 1e-4 in I_LO.
LoOptimum optimize_lo(const SystemParams& params, double lo_min, double lo_max);

/// Headered delimiter-separated text; '#' metadata lines first, then a column
/// header row. Extra '#' lines from `metadata` are emitted verbatim.
void write_sweep(const SweepResult& sweep, const std::string& path,
                 const std::vector<std::string>& metadata = {});

}  // namespace qkdbhd

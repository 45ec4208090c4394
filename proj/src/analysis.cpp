#include "analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>

namespace qkdbhd {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// 3x3 symmetric solve / inverse via the adjugate, in long double.
using Mat3 = std::array<std::array<long double, 3>, 3>;

Mat3 invert3(const Mat3& m) {
  const long double det =
      m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
      m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
      m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  require(det != 0.0L, "fit_quadratic: rank-deficient design "
                       "(need >= 3 distinct x values)");
  Mat3 inv;
  inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
  inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
  inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
  inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
  inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
  inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
  inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
  inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
  inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
  return inv;
}

struct SweepSpec {
  std::string axis;
  std::string unit;
  bool per_second;
  std::vector<double> grid;
  std::function<KeyRateResult(double)> eval;
};

SweepResult run_sweep(const SweepSpec& spec) {
  require(spec.grid.size() >= 2, "sweep: need at least 2 grid points");
  SweepResult sweep;
  sweep.axis = spec.axis;
  sweep.unit = spec.unit;
  sweep.per_second = spec.per_second;
  sweep.points.reserve(spec.grid.size());
  for (const double x : spec.grid) sweep.points.emplace_back(x, spec.eval(x));

  sweep.argmax = 0;
  for (std::size_t i = 1; i < sweep.points.size(); ++i)
    if (sweep.objective(i) > sweep.objective(sweep.argmax)) sweep.argmax = i;

  // Bisect the objective between grid points where the sign flips.
  auto objective_at = [&](double x) {
    const KeyRateResult r = spec.eval(x);
    return spec.per_second ? r.delta_i_per_second : r.delta_i;
  };
  for (std::size_t i = 1; i < sweep.points.size(); ++i) {
    const double f0 = sweep.objective(i - 1);
    const double f1 = sweep.objective(i);
    if ((f0 > 0.0) == (f1 > 0.0)) continue;
    double a = sweep.points[i - 1].first, b = sweep.points[i].first;
    double fa = f0;
    for (int iter = 0; iter < 80 && (b - a) > 1e-9 * std::abs(b); ++iter) {
      const double mid = 0.5 * (a + b);
      const double fm = objective_at(mid);
      if ((fm > 0.0) == (fa > 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    sweep.zero_crossings.push_back(0.5 * (a + b));
  }
  return sweep;
}

std::vector<double> linspace(double lo, double hi, int n) {
  require(n >= 2 && hi > lo, "sweep: invalid range");
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return xs;
}

std::vector<double> logspace(double lo, double hi, int n) {
  require(n >= 2 && hi > lo && lo > 0.0, "sweep: invalid log range");
  std::vector<double> xs(static_cast<std::size_t>(n));
  const double llo = std::log10(lo), lhi = std::log10(hi);
  for (int i = 0; i < n; ++i)
    xs[static_cast<std::size_t>(i)] =
        std::pow(10.0, llo + (lhi - llo) * i / (n - 1));
  return xs;
}

}  // namespace

QuadraticFit fit_quadratic(const std::vector<std::pair<double, double>>& points) {
  const std::size_t n = points.size();
  require(n >= 3, "fit_quadratic: need at least 3 points");
  {
    std::vector<double> xs;
    for (const auto& [x, y] : points)
      if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
    require(xs.size() >= 3, "fit_quadratic: need >= 3 distinct x values");
  }

  // Center and scale x so the normal equations stay well conditioned for
  // abscissae up to ~1e9.
  long double mu = 0.0L, sigma = 0.0L;
  for (const auto& [x, y] : points) mu += x;
  mu /= static_cast<long double>(n);
  for (const auto& [x, y] : points) sigma += (x - mu) * (x - mu);
  sigma = std::sqrt(sigma / static_cast<long double>(n));
  if (sigma == 0.0L) sigma = 1.0L;

  Mat3 ata{};
  std::array<long double, 3> atb{};
  for (const auto& [x, y] : points) {
    const long double u = (x - mu) / sigma;
    const std::array<long double, 3> row = {u * u, u, 1.0L};
    for (int i = 0; i < 3; ++i) {
      atb[i] += row[i] * y;
      for (int j = 0; j < 3; ++j) ata[i][j] += row[i] * row[j];
    }
  }
  const Mat3 inv = invert3(ata);
  std::array<long double, 3> p{};  // y = p0 u^2 + p1 u + p2
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) p[i] += inv[i][j] * atb[j];

  long double ss_res = 0.0L, ss_tot = 0.0L, ybar = 0.0L;
  for (const auto& [x, y] : points) ybar += y;
  ybar /= static_cast<long double>(n);
  for (const auto& [x, y] : points) {
    const long double u = (x - mu) / sigma;
    const long double fit = p[0] * u * u + p[1] * u + p[2];
    ss_res += (y - fit) * (y - fit);
    ss_tot += (y - ybar) * (y - ybar);
  }

  // Back-transform (a, b, c) = T p and covariance T C T^T.
  const long double s2 = n > 3 ? ss_res / static_cast<long double>(n - 3) : 0.0L;
  const Mat3 t = {{{1.0L / (sigma * sigma), 0.0L, 0.0L},
                   {-2.0L * mu / (sigma * sigma), 1.0L / sigma, 0.0L},
                   {mu * mu / (sigma * sigma), -mu / sigma, 1.0L}}};
  QuadraticFit fit;
  fit.a = static_cast<double>(t[0][0] * p[0]);
  fit.b = static_cast<double>(t[1][0] * p[0] + t[1][1] * p[1]);
  fit.c = static_cast<double>(t[2][0] * p[0] + t[2][1] * p[1] + t[2][2] * p[2]);
  std::array<long double, 3> se{};
  for (int i = 0; i < 3; ++i) {
    long double var = 0.0L;
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) var += t[i][j] * inv[j][k] * t[i][k];
    se[i] = std::sqrt(std::max(0.0L, var * s2));
  }
  fit.se_a = static_cast<double>(se[0]);
  fit.se_b = static_cast<double>(se[1]);
  fit.se_c = static_cast<double>(se[2]);
  fit.r_squared =
      ss_tot > 0.0L ? static_cast<double>(1.0L - ss_res / ss_tot) : 1.0;
  return fit;
}

NoiseCoefficients decompose_noise(const QuadraticFit& fit) {
  require(fit.b > 0.0, "decompose_noise: shot-noise (linear) term must be "
                       "positive");
  return {fit.c / fit.b, fit.a / fit.b};
}

SweepResult sweep_repetition(const SystemParams& params, double r_min_hz,
                             double r_max_hz, int n_points) {
  SystemParams base = params;
  base.overlap_model = OverlapModel::bandwidth;
  SweepSpec spec;
  spec.axis = "repetition_hz";
  spec.unit = "Hz";
  spec.per_second = true;
  spec.grid = linspace(r_min_hz, r_max_hz, n_points);
  spec.eval = [base](double r) {
    SystemParams p = base;
    p.repetition_hz = r;
    return secret_key_rate(p);
  };
  return run_sweep(spec);
}

SweepResult sweep_cmrr(const SystemParams& params, double cmrr_min_db,
                       double cmrr_max_db, int n_points) {
  SystemParams base = params;
  base.nlo_model = NloModel::physical;
  SweepSpec spec;
  spec.axis = "cmrr_db";
  spec.unit = "dB";
  spec.per_second = false;
  spec.grid = linspace(cmrr_min_db, cmrr_max_db, n_points);
  spec.eval = [base](double cmrr) {
    SystemParams p = base;
    p.bhd.set_delta_from_cmrr(cmrr);
    return secret_key_rate(p);
  };
  return run_sweep(spec);
}

SweepResult sweep_lo(const SystemParams& params, double lo_min, double lo_max,
                     int n_points) {
  SweepSpec spec;
  spec.axis = "lo_photons_per_pulse";
  spec.unit = "photons";
  spec.per_second = false;
  spec.grid = logspace(lo_min, lo_max, n_points);
  spec.eval = [params](double lo) {
    SystemParams p = params;
    p.lo.photons_per_pulse = lo;
    return secret_key_rate(p);
  };
  return run_sweep(spec);
}

LoOptimum optimize_lo(const SystemParams& params, double lo_min, double lo_max) {
  require(lo_min > 0.0 && lo_max > lo_min, "optimize_lo: invalid LO range");
  auto eval = [&params](double lo) {
    SystemParams p = params;
    p.lo.photons_per_pulse = lo;
    return secret_key_rate(p);
  };
  auto objective = [&eval](double lo) { return eval(lo).delta_i; };

  // Coarse log-spaced bracket.
  const int coarse = 64;
  const std::vector<double> grid = logspace(lo_min, lo_max, coarse);
  std::size_t best = 0;
  double best_val = objective(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = objective(grid[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  if (best == 0 || best + 1 == grid.size()) {
    LoOptimum out;
    out.lo_photons = grid[best];
    out.result = eval(grid[best]);
    out.monotone = true;
    return out;
  }

  // Golden-section refinement on log10(I_LO) to relative 1e-4 in I_LO.
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log10(grid[best - 1]);
  double b = std::log10(grid[best + 1]);
  const double tol = std::log10(1.0 + 1e-4);
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = objective(std::pow(10.0, c));
  double fd = objective(std::pow(10.0, d));
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = objective(std::pow(10.0, c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = objective(std::pow(10.0, d));
    }
  }
  LoOptimum out;
  out.lo_photons = std::pow(10.0, 0.5 * (a + b));
  out.result = eval(out.lo_photons);
  return out;
}

SweepResult sweep_distance(const SystemParams& params, double km_min,
                           double km_max, double loss_db_per_km,
                           int n_points) {
  require(loss_db_per_km > 0.0, "sweep_distance: loss must be > 0");
  SweepSpec spec;
  spec.axis = "distance_km";
  spec.unit = "km";
  spec.per_second = true;
  spec.grid = linspace(km_min, km_max, n_points);
  spec.eval = [params, loss_db_per_km](double km) {
    SystemParams p = params;
    p.channel = ChannelParams::from_distance(km, loss_db_per_km);
    // LO level re-optimized at every distance.
    const LoOptimum opt = optimize_lo(p, 1e5, 1e11);
    return opt.result;
  };
  return run_sweep(spec);
}

void write_sweep(const SweepResult& sweep, const std::string& path,
                 const std::vector<std::string>& metadata) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_sweep: cannot open " + path);
  for (const auto& line : metadata) out << "# " << line << '\n';
  out << "# axis: " << sweep.axis << " [" << sweep.unit << "]\n";
  out << sweep.axis
      << ",i_ab,i_be,delta_i,delta_i_per_second,chi,eps,eps_e,"
         "eps_overlap,n_lo,n_ele\n";
  out.precision(12);
  for (const auto& [x, r] : sweep.points) {
    out << x << ',' << r.i_ab << ',' << r.i_be << ',' << r.delta_i << ','
        << r.delta_i_per_second << ',' << r.chi << ',' << r.eps << ','
        << r.eps_e << ',' << r.budget.eps_overlap << ',' << r.budget.n_lo
        << ',' << r.budget.n_ele << '\n';
  }
}

}  // namespace qkdbhd

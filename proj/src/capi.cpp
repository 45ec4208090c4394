#include "qkdbhd.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "analysis.hpp"
#include "config.hpp"
#include "keyrate.hpp"
#include "montecarlo.hpp"

namespace {

thread_local std::string g_last_error;

qkd_status set_error(qkd_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Run `fn` translating C++ exceptions into status codes.
template <typename Fn>
qkd_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const qkdbhd::ConfigError& e) {
    return set_error(QKD_ERR_PARSE, e.what());
  } catch (const std::invalid_argument& e) {
    return set_error(QKD_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::runtime_error& e) {
    return set_error(QKD_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(QKD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(QKD_ERR_INTERNAL, e.what());
  }
}

void fill_result(const qkdbhd::KeyRateResult& r, qkd_keyrate_result* out) {
  out->i_ab = r.i_ab;
  out->i_be = r.i_be;
  out->delta_i = r.delta_i;
  out->delta_i_per_second = r.delta_i_per_second;
  out->chi = r.chi;
  out->eps = r.eps;
  out->eps_e = r.eps_e;
  out->eps_a = r.budget.eps_a;
  out->eps_overlap = r.budget.eps_overlap;
  out->n_lo = r.budget.n_lo;
  out->n_leak = r.budget.n_leak;
  out->n_ele = r.budget.n_ele;
}

}  // namespace

struct qkd_config {
  qkdbhd::Config cfg;
  std::string serialized;  // storage for qkd_config_serialize
};

struct qkd_sweep {
  qkdbhd::SweepResult sweep;
};

struct qkd_trace {
  qkdbhd::PulseTrace trace;
};

extern "C" {

const char* qkd_status_name(qkd_status status) {
  switch (status) {
    case QKD_OK: return "ok";
    case QKD_ERR_INVALID_ARGUMENT: return "invalid argument";
    case QKD_ERR_PARSE: return "parse error";
    case QKD_ERR_IO: return "io error";
    case QKD_ERR_DEGENERATE: return "degenerate";
    case QKD_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* qkd_last_error(void) { return g_last_error.c_str(); }

qkd_status qkd_config_load(const char* path, qkd_config** out) {
  if (!path || !out) return set_error(QKD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto handle = std::make_unique<qkd_config>();
    handle->cfg = qkdbhd::Config::parse_file(path);
    handle->cfg.check_schema();
    *out = handle.release();
    return QKD_OK;
  });
}

qkd_status qkd_config_parse(const char* text, qkd_config** out) {
  if (!text || !out) return set_error(QKD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto handle = std::make_unique<qkd_config>();
    handle->cfg = qkdbhd::Config::parse_string(text);
    handle->cfg.check_schema();
    *out = handle.release();
    return QKD_OK;
  });
}

qkd_status qkd_config_set(qkd_config* cfg, const char* section,
                          const char* key, const char* value) {
  if (!cfg || !section || !key || !value)
    return set_error(QKD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    cfg->cfg.set(section, key, value);
    return QKD_OK;
  });
}

const char* qkd_config_serialize(qkd_config* cfg) {
  if (!cfg) return "";
  cfg->serialized = cfg->cfg.serialize();
  return cfg->serialized.c_str();
}

const char* qkd_config_get(const qkd_config* cfg, const char* section,
                           const char* key) {
  if (!cfg || !section || !key) return nullptr;
  if (!cfg->cfg.has(section, key)) return nullptr;
  return cfg->cfg.get(section, key).c_str();
}

void qkd_config_free(qkd_config* cfg) { delete cfg; }

qkd_status qkd_sim_params_resolve(const qkd_config* cfg, qkd_sim_params* out) {
  if (!cfg || !out) return set_error(QKD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const qkdbhd::SimConfig sim = qkdbhd::sim_config_from_config(cfg->cfg);
    out->lo_photons_per_pulse = sim.lo.photons_per_pulse;
    out->lo_fractional_fluctuation = sim.lo.fractional_fluctuation;
    out->t2 = sim.splitter.t2;
    out->r2 = sim.splitter.r2;
    out->g1 = sim.splitter.g1;
    out->g2 = sim.splitter.g2;
    out->delta = sim.delta();
    out->tau_s = sim.tau_s;
    out->repetition_hz = sim.repetition_hz;
    out->sample_rate_hz = sim.sample_rate_hz;
    out->window_s = sim.window_s;
    out->electronic_noise_rms_volts = sim.electronic_noise_rms_volts;
    out->volts_per_photoelectron = sim.volts_per_photoelectron;
    out->seed = sim.seed;
    out->n_pulses = sim.n_pulses;
    return QKD_OK;
  });
}

qkd_status qkd_keyrate(const qkd_config* cfg, qkd_keyrate_result* out) {
  if (!cfg || !out) return set_error(QKD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const qkdbhd::SystemParams params = qkdbhd::system_params_from_config(cfg->cfg);
    fill_result(qkdbhd::secret_key_rate(params), out);
    return QKD_OK;
  });
}

double qkd_cmrr_from_delta(double delta) {
  return qkdbhd::cmrr_from_delta(delta);
}

double qkd_delta_from_cmrr(double cmrr_db) {
  return qkdbhd::delta_from_cmrr(cmrr_db);
}

qkd_status qkd_imbalance_delta(double t2, double r2, double g1, double g2,
                               double* out) {
  if (!out) return set_error(QKD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = qkdbhd::imbalance_delta({t2, r2, g1, g2});
    return QKD_OK;
  });
}

qkd_status qkd_overlap_noise(double v_a, double bandwidth_hz,
                             double repetition_hz, double* out) {
  if (!out) return set_error(QKD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = qkdbhd::overlap_noise({v_a}, bandwidth_hz, repetition_hz);
    return QKD_OK;
  });
}

qkd_status qkd_overlap_noise_from_cc(double v_a, double cc, int neighbors,
                                     double* out) {
  if (!out) return set_error(QKD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = qkdbhd::overlap_noise_from_cc({v_a}, cc, neighbors);
    return QKD_OK;
  });
}

qkd_status qkd_sweep_run(const qkd_config* cfg, qkd_sweep_axis axis,
                         double axis_min, double axis_max, int n_points,
                         qkd_sweep** out) {
  if (!cfg || !out) return set_error(QKD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const qkdbhd::SystemParams params = qkdbhd::system_params_from_config(cfg->cfg);
    auto handle = std::make_unique<qkd_sweep>();
    switch (axis) {
      case QKD_SWEEP_REPETITION:
        handle->sweep =
            qkdbhd::sweep_repetition(params, axis_min, axis_max, n_points);
        break;
      case QKD_SWEEP_CMRR:
        handle->sweep = qkdbhd::sweep_cmrr(params, axis_min, axis_max, n_points);
        break;
      case QKD_SWEEP_LO:
        if (params.nlo_model == qkdbhd::NloModel::none &&
            params.ele_model != qkdbhd::EleModel::coefficient)
          throw std::invalid_argument(
              "LO sweep: no LO-dependent noise term configured");
        handle->sweep = qkdbhd::sweep_lo(params, axis_min, axis_max, n_points);
        break;
      case QKD_SWEEP_DISTANCE: {
        const double loss =
            cfg->cfg.get_double_or("channel", "loss_db_per_km", 0.21);
        handle->sweep = qkdbhd::sweep_distance(params, axis_min, axis_max,
                                               loss, n_points);
        break;
      }
      default:
        return set_error(QKD_ERR_INVALID_ARGUMENT, "unknown sweep axis");
    }
    *out = handle.release();
    return QKD_OK;
  });
}

size_t qkd_sweep_size(const qkd_sweep* sweep) {
  return sweep ? sweep->sweep.points.size() : 0;
}

qkd_status qkd_sweep_point(const qkd_sweep* sweep, size_t index, double* x,
                           qkd_keyrate_result* result) {
  if (!sweep || index >= sweep->sweep.points.size())
    return set_error(QKD_ERR_INVALID_ARGUMENT, "sweep index out of range");
  if (x) *x = sweep->sweep.points[index].first;
  if (result) fill_result(sweep->sweep.points[index].second, result);
  return QKD_OK;
}

qkd_status qkd_sweep_argmax(const qkd_sweep* sweep, double* x,
                            qkd_keyrate_result* result) {
  if (!sweep) return set_error(QKD_ERR_INVALID_ARGUMENT, "null sweep");
  return qkd_sweep_point(sweep, sweep->sweep.argmax, x, result);
}

size_t qkd_sweep_zero_crossings(const qkd_sweep* sweep, double* xs,
                                size_t capacity) {
  if (!sweep) return 0;
  const auto& zc = sweep->sweep.zero_crossings;
  for (size_t i = 0; i < zc.size() && i < capacity; ++i) xs[i] = zc[i];
  return zc.size();
}

qkd_status qkd_sweep_level_crossing(const qkd_sweep* sweep, double level,
                                    double* x) {
  if (!sweep || !x) return set_error(QKD_ERR_INVALID_ARGUMENT, "null argument");
  const auto& s = sweep->sweep;
  for (size_t i = 1; i < s.points.size(); ++i) {
    const double f0 = s.objective(i - 1) - level;
    const double f1 = s.objective(i) - level;
    if (f0 < 0.0 && f1 >= 0.0) {
      const double x0 = s.points[i - 1].first, x1 = s.points[i].first;
      *x = f1 == f0 ? x1 : x0 + (x1 - x0) * (-f0) / (f1 - f0);
      return QKD_OK;
    }
  }
  return set_error(QKD_ERR_DEGENERATE, "objective never reaches the level");
}

qkd_status qkd_sweep_write(const qkd_sweep* sweep, const char* path,
                           const qkd_config* cfg_for_header) {
  if (!sweep || !path)
    return set_error(QKD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::vector<std::string> metadata;
    metadata.push_back(std::string("qkdbhd version ") + QKDBHD_VERSION);
    if (cfg_for_header) {
      metadata.push_back("resolved configuration:");
      std::string serialized = cfg_for_header->cfg.serialize();
      std::size_t start = 0;
      while (start < serialized.size()) {
        std::size_t end = serialized.find('\n', start);
        if (end == std::string::npos) end = serialized.size();
        metadata.push_back("  " + serialized.substr(start, end - start));
        start = end + 1;
      }
    }
    qkdbhd::write_sweep(sweep->sweep, path, metadata);
    return QKD_OK;
  });
}

void qkd_sweep_free(qkd_sweep* sweep) { delete sweep; }

qkd_status qkd_optimize_lo(const qkd_config* cfg, double lo_min, double lo_max,
                           double* lo_opt, qkd_keyrate_result* result,
                           int* monotone) {
  if (!cfg || !lo_opt) return set_error(QKD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const qkdbhd::SystemParams params = qkdbhd::system_params_from_config(cfg->cfg);
    const qkdbhd::LoOptimum opt = qkdbhd::optimize_lo(params, lo_min, lo_max);
    *lo_opt = opt.lo_photons;
    if (result) fill_result(opt.result, result);
    if (monotone) *monotone = opt.monotone ? 1 : 0;
    return QKD_OK;
  });
}

qkd_status qkd_fit_quadratic(const double* x, const double* y, size_t n,
                             qkd_quadratic_fit* out) {
  if (!x || !y || !out)
    return set_error(QKD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::vector<std::pair<double, double>> points(n);
    for (size_t i = 0; i < n; ++i) points[i] = {x[i], y[i]};
    const qkdbhd::QuadraticFit fit = qkdbhd::fit_quadratic(points);
    *out = {fit.a, fit.b, fit.c, fit.se_a, fit.se_b, fit.se_c, fit.r_squared};
    return QKD_OK;
  });
}

qkd_status qkd_decompose_noise(const qkd_quadratic_fit* fit, double* c_ele,
                               double* c_lo) {
  if (!fit || !c_ele || !c_lo)
    return set_error(QKD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    qkdbhd::QuadraticFit f;
    f.a = fit->a;
    f.b = fit->b;
    f.c = fit->c;
    const qkdbhd::NoiseCoefficients nc = qkdbhd::decompose_noise(f);
    *c_ele = nc.c_ele;
    *c_lo = nc.c_lo;
    return QKD_OK;
  });
}

qkd_status qkd_mc_simulate(const qkd_config* cfg, uint64_t seed_override,
                           qkd_trace** out) {
  if (!cfg || !out) return set_error(QKD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    qkdbhd::SimConfig sim = qkdbhd::sim_config_from_config(cfg->cfg);
    if (seed_override != 0) sim.seed = seed_override;
    auto handle = std::make_unique<qkd_trace>();
    handle->trace = qkdbhd::simulate_trace(sim);
    *out = handle.release();
    return QKD_OK;
  });
}

qkd_status qkd_trace_load(const char* path, double repetition_hz,
                          qkd_trace** out) {
  if (!path || !out) return set_error(QKD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto handle = std::make_unique<qkd_trace>();
    handle->trace = qkdbhd::load_trace(path, repetition_hz);
    *out = handle.release();
    return QKD_OK;
  });
}

qkd_status qkd_trace_save(const qkd_trace* trace, const char* path) {
  if (!trace || !path)
    return set_error(QKD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    qkdbhd::save_trace(trace->trace, path);
    return QKD_OK;
  });
}

void qkd_trace_free(qkd_trace* trace) { delete trace; }

size_t qkd_trace_n_pulses(const qkd_trace* trace) {
  return trace ? trace->trace.pulse_starts.size() : 0;
}

qkd_status qkd_trace_quadratures(const qkd_trace* trace, double window_s,
                                 double* out, size_t capacity, size_t* n) {
  if (!trace || !out || !n)
    return set_error(QKD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const qkdbhd::QuadratureSeries series =
        qkdbhd::integrate_quadratures(trace->trace, window_s);
    *n = series.n();
    if (capacity < series.n())
      return set_error(QKD_ERR_INVALID_ARGUMENT,
                       "quadrature buffer too small");
    for (size_t i = 0; i < series.n(); ++i) out[i] = series.values[i];
    return QKD_OK;
  });
}

qkd_status qkd_trace_cc(const qkd_trace* trace, double window_s, double* cc) {
  if (!trace || !cc) return set_error(QKD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const qkdbhd::QuadratureSeries series =
        qkdbhd::integrate_quadratures(trace->trace, window_s);
    double value = 0.0;
    if (!qkdbhd::correlation_coefficient(series, value))
      return set_error(QKD_ERR_DEGENERATE,
                       "correlation coefficient undefined for a constant "
                       "quadrature series");
    *cc = value;
    return QKD_OK;
  });
}

qkd_status qkd_correlation_coefficient(const double* values, size_t n,
                                       double* cc) {
  if (!values || !cc)
    return set_error(QKD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    qkdbhd::QuadratureSeries series;
    series.values.assign(values, values + n);
    double value = 0.0;
    if (!qkdbhd::correlation_coefficient(series, value))
      return set_error(QKD_ERR_DEGENERATE,
                       "correlation coefficient undefined for a constant "
                       "series");
    *cc = value;
    return QKD_OK;
  });
}

qkd_status qkd_mc_noise_scan(const qkd_config* cfg, uint64_t seed_override,
                             const double* lo_levels, size_t n_levels,
                             double* variances) {
  if (!cfg || !lo_levels || !variances)
    return set_error(QKD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    qkdbhd::SimConfig sim = qkdbhd::sim_config_from_config(cfg->cfg);
    if (seed_override != 0) sim.seed = seed_override;
    const std::vector<double> levels(lo_levels, lo_levels + n_levels);
    const auto scan = qkdbhd::noise_vs_lo_scan(sim, levels);
    for (size_t i = 0; i < scan.size(); ++i) variances[i] = scan[i].second;
    return QKD_OK;
  });
}

}  // extern "C"

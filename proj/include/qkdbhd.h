/* C API for the GMCS QKD balanced-homodyne-detector noise and key-rate
 * library. All functions returning qkd_status set a thread-local error
 * message retrievable via qkd_last_error() on failure. Handles are opaque
 * and freed with the matching *_free call. */
#ifndef QKDBHD_H
#define QKDBHD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define QKDBHD_VERSION "1.0.0"

typedef enum {
  QKD_OK = 0,
  QKD_ERR_INVALID_ARGUMENT = 1, /* bad parameter value or range */
  QKD_ERR_PARSE = 2,            /* config or trace file syntax error */
  QKD_ERR_IO = 3,               /* file not readable/writable */
  QKD_ERR_DEGENERATE = 4,       /* statistic undefined (e.g. constant series) */
  QKD_ERR_INTERNAL = 5
} qkd_status;

const char* qkd_status_name(qkd_status status);

/* Message for the most recent failure on this thread; empty string if none. */
const char* qkd_last_error(void);

/* ---- configuration ---------------------------------------------------- */

typedef struct qkd_config qkd_config;

qkd_status qkd_config_load(const char* path, qkd_config** out);
qkd_status qkd_config_parse(const char* text, qkd_config** out);
/* Strict override, e.g. qkd_config_set(cfg, "run", "repetition_mhz", "36"). */
qkd_status qkd_config_set(qkd_config* cfg, const char* section,
                          const char* key, const char* value);
/* Serialized form; valid until the next call on this config. */
const char* qkd_config_serialize(qkd_config* cfg);
/* Raw value of one key, or NULL when absent. Valid until the config is
 * modified or freed. */
const char* qkd_config_get(const qkd_config* cfg, const char* section,
                           const char* key);
void qkd_config_free(qkd_config* cfg);

/* Simulator settings with all defaults resolved (tau = 1/bandwidth etc.). */
typedef struct {
  double lo_photons_per_pulse;
  double lo_fractional_fluctuation;
  double t2, r2, g1, g2; /* splitter/gain tuple */
  double delta;          /* imbalance implied by the tuple */
  double tau_s;
  double repetition_hz;
  double sample_rate_hz;
  double window_s;
  double electronic_noise_rms_volts;
  double volts_per_photoelectron;
  uint64_t seed;
  int n_pulses;
} qkd_sim_params;

qkd_status qkd_sim_params_resolve(const qkd_config* cfg, qkd_sim_params* out);

/* ---- key rate --------------------------------------------------------- */

typedef struct {
  double i_ab;               /* bits/pulse */
  double i_be;               /* bits/pulse */
  double delta_i;            /* bits/pulse, may be negative */
  double delta_i_per_second; /* bits/s; 0 when no repetition rate is set */
  double chi;                /* equivalent input noise, shot-noise units */
  double eps;                /* total input-referred excess noise */
  double eps_e;              /* Eve-attributed part of eps */
  /* resolved noise budget (shot-noise units) */
  double eps_a;       /* input-referred */
  double eps_overlap; /* input-referred */
  double n_lo;        /* output-referred */
  double n_leak;      /* output-referred */
  double n_ele;       /* output-referred */
} qkd_keyrate_result;

qkd_status qkd_keyrate(const qkd_config* cfg, qkd_keyrate_result* out);

/* ---- model primitives ------------------------------------------------- */

/* CMRR = -20 log10(2|delta|); returns +inf for delta == 0. */
double qkd_cmrr_from_delta(double delta);
double qkd_delta_from_cmrr(double cmrr_db);
qkd_status qkd_imbalance_delta(double t2, double r2, double g1, double g2,
                               double* out);
qkd_status qkd_overlap_noise(double v_a, double bandwidth_hz,
                             double repetition_hz, double* out);
qkd_status qkd_overlap_noise_from_cc(double v_a, double cc, int neighbors,
                                     double* out);

/* ---- sweeps and optimization ------------------------------------------ */

typedef enum {
  QKD_SWEEP_REPETITION = 0, /* axis: Hz,     objective: bits/s  */
  QKD_SWEEP_CMRR = 1,       /* axis: dB,     objective: bits/pulse */
  QKD_SWEEP_LO = 2,         /* axis: photons, objective: bits/pulse */
  QKD_SWEEP_DISTANCE = 3    /* axis: km,     objective: bits/s  */
} qkd_sweep_axis;

typedef struct qkd_sweep qkd_sweep;

qkd_status qkd_sweep_run(const qkd_config* cfg, qkd_sweep_axis axis,
                         double axis_min, double axis_max, int n_points,
                         qkd_sweep** out);
size_t qkd_sweep_size(const qkd_sweep* sweep);
qkd_status qkd_sweep_point(const qkd_sweep* sweep, size_t index, double* x,
                           qkd_keyrate_result* result);
qkd_status qkd_sweep_argmax(const qkd_sweep* sweep, double* x,
                            qkd_keyrate_result* result);
/* Objective roots; returns the number available (may exceed capacity). */
size_t qkd_sweep_zero_crossings(const qkd_sweep* sweep, double* xs,
                                size_t capacity);
/* Smallest axis value where the objective reaches `level` (grid-interpolated);
 * QKD_ERR_DEGENERATE when the level is never reached. */
qkd_status qkd_sweep_level_crossing(const qkd_sweep* sweep, double level,
                                    double* x);
qkd_status qkd_sweep_write(const qkd_sweep* sweep, const char* path,
                           const qkd_config* cfg_for_header);
void qkd_sweep_free(qkd_sweep* sweep);

/* Maximize delta_i over the LO photon number. monotone is set to 1 when the
 * objective had no interior maximum and a range boundary is returned. */
qkd_status qkd_optimize_lo(const qkd_config* cfg, double lo_min, double lo_max,
                           double* lo_opt, qkd_keyrate_result* result,
                           int* monotone);

/* ---- quadratic fit ----------------------------------------------------- */

typedef struct {
  double a, b, c;          /* y = a x^2 + b x + c */
  double se_a, se_b, se_c; /* standard errors */
  double r_squared;
} qkd_quadratic_fit;

qkd_status qkd_fit_quadratic(const double* x, const double* y, size_t n,
                             qkd_quadratic_fit* out);
/* c_ele = c/b and c_lo = a/b of a variance-vs-LO fit. */
qkd_status qkd_decompose_noise(const qkd_quadratic_fit* fit, double* c_ele,
                               double* c_lo);

/* ---- Monte Carlo pulse-train simulation -------------------------------- */

typedef struct qkd_trace qkd_trace;

/* Simulate one pulse train from the [sim] section; seed_override replaces
 * the config seed when nonzero. */
qkd_status qkd_mc_simulate(const qkd_config* cfg, uint64_t seed_override,
                           qkd_trace** out);
qkd_status qkd_trace_load(const char* path, double repetition_hz,
                          qkd_trace** out);
qkd_status qkd_trace_save(const qkd_trace* trace, const char* path);
void qkd_trace_free(qkd_trace* trace);

size_t qkd_trace_n_pulses(const qkd_trace* trace);
/* Windowed quadrature integrals, one per pulse (V*s). */
qkd_status qkd_trace_quadratures(const qkd_trace* trace, double window_s,
                                 double* out, size_t capacity, size_t* n);
/* Lag-1 Pearson correlation of consecutive quadratures;
 * QKD_ERR_DEGENERATE for a constant series. */
qkd_status qkd_trace_cc(const qkd_trace* trace, double window_s, double* cc);
qkd_status qkd_correlation_coefficient(const double* values, size_t n,
                                       double* cc);

/* Quadrature variance at each LO level (config sim settings otherwise);
 * variances must hold n_levels values. */
qkd_status qkd_mc_noise_scan(const qkd_config* cfg, uint64_t seed_override,
                             const double* lo_levels, size_t n_levels,
                             double* variances);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* QKDBHD_H */

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "qkdbhd.h"

namespace {

const char* kRepetition =
    "[modulation]\n"
    "v_a = 16.9\n"
    "[channel]\n"
    "transmittance = 0.758\n"
    "[receiver]\n"
    "eta = 0.44\n"
    "beta = 0.898\n"
    "[bhd]\n"
    "bandwidth_mhz = 100\n"
    "[noise]\n"
    "eps_a = 0.056\n"
    "n_ele = 0.045\n"
    "overlap = bandwidth\n"
    "[run]\n"
    "repetition_mhz = 36\n";

const char* kSim =
    "[lo]\n"
    "photons_per_pulse = 1e6\n"
    "fractional_fluctuation = 0\n"
    "[bhd]\n"
    "bandwidth_mhz = 100\n"
    "delta = 0\n"
    "[run]\n"
    "repetition_mhz = 12.5\n"
    "[sim]\n"
    "tau_ns = 5\n"
    "sample_rate_gsps = 2\n"
    "window_ns = 80\n"
    "n_pulses = 200\n"
    "seed = 42\n"
    "electronic_noise_rms_volts = 0\n"
    "volts_per_photoelectron = 1e-9\n";

struct ConfigGuard {
  qkd_config* cfg = nullptr;
  ~ConfigGuard() { qkd_config_free(cfg); }
};

}  // namespace

TEST_CASE("c api: config lifecycle") {
  ConfigGuard g;
  REQUIRE(qkd_config_parse(kRepetition, &g.cfg) == QKD_OK);

  SUBCASE("get and serialize") {
    const char* v = qkd_config_get(g.cfg, "modulation", "v_a");
    REQUIRE(v != nullptr);
    CHECK(std::string(v) == "16.9");
    CHECK(qkd_config_get(g.cfg, "lo", "photons_per_pulse") == nullptr);
    const char* text = qkd_config_serialize(g.cfg);
    REQUIRE(text != nullptr);
    ConfigGuard again;
    CHECK(qkd_config_parse(text, &again.cfg) == QKD_OK);
  }
  SUBCASE("set accepts known keys only") {
    CHECK(qkd_config_set(g.cfg, "run", "repetition_mhz", "50") == QKD_OK);
    CHECK(std::string(qkd_config_get(g.cfg, "run", "repetition_mhz")) == "50");
    CHECK(qkd_config_set(g.cfg, "run", "rep_rate", "50") == QKD_ERR_PARSE);
    CHECK(std::strlen(qkd_last_error()) > 0);
  }
  SUBCASE("parse errors") {
    qkd_config* bad = nullptr;
    CHECK(qkd_config_parse("[modulation\n", &bad) == QKD_ERR_PARSE);
    CHECK(bad == nullptr);
    CHECK(std::string(qkd_last_error()).find("section") != std::string::npos);
    CHECK(qkd_config_parse("[mystery]\nx = 1\n", &bad) == QKD_ERR_PARSE);
  }
  SUBCASE("load missing file") {
    qkd_config* bad = nullptr;
    CHECK(qkd_config_load("no_such_file.cfg", &bad) == QKD_ERR_IO);
    CHECK(bad == nullptr);
  }
  SUBCASE("null arguments") {
    CHECK(qkd_config_parse(nullptr, &g.cfg) == QKD_ERR_INVALID_ARGUMENT);
    CHECK(qkd_config_parse(kRepetition, nullptr) == QKD_ERR_INVALID_ARGUMENT);
    qkd_config_free(nullptr);  // must be a no-op
  }
  SUBCASE("status names") {
    CHECK(std::string(qkd_status_name(QKD_OK)) == "ok");
    CHECK(std::string(qkd_status_name(QKD_ERR_DEGENERATE)) == "degenerate");
  }
}

TEST_CASE("c api: key rate matches the reference evaluation") {
  ConfigGuard g;
  REQUIRE(qkd_config_parse(kRepetition, &g.cfg) == QKD_OK);
  qkd_keyrate_result r;
  REQUIRE(qkd_keyrate(g.cfg, &r) == QKD_OK);

  oracle::Inputs in{16.9, 0.758, 0.44, 0.898};
  in.eps_a = 0.056;
  in.n_ele = 0.045;
  in.eps_overlap = oracle::overlap(16.9, 100e6, 36e6);
  in.repetition_hz = 36e6;
  const oracle::Outputs expected = oracle::evaluate(in);
  CHECK(r.i_ab == doctest::Approx(expected.i_ab).epsilon(1e-12));
  CHECK(r.i_be == doctest::Approx(expected.i_be).epsilon(1e-12));
  CHECK(r.delta_i == doctest::Approx(expected.delta_i).epsilon(1e-10));
  CHECK(r.delta_i_per_second ==
        doctest::Approx(expected.delta_i_per_second).epsilon(1e-10));
  CHECK(r.eps_overlap == doctest::Approx(in.eps_overlap).epsilon(1e-12));
  CHECK(r.n_ele == doctest::Approx(0.045).epsilon(1e-12));

  SUBCASE("invalid physics is reported, not crashed") {
    REQUIRE(qkd_config_set(g.cfg, "receiver", "eta", "-1") == QKD_OK);
    CHECK(qkd_keyrate(g.cfg, &r) == QKD_ERR_INVALID_ARGUMENT);
    CHECK(std::strlen(qkd_last_error()) > 0);
  }
  SUBCASE("null arguments") {
    CHECK(qkd_keyrate(nullptr, &r) == QKD_ERR_INVALID_ARGUMENT);
    CHECK(qkd_keyrate(g.cfg, nullptr) == QKD_ERR_INVALID_ARGUMENT);
  }
}

TEST_CASE("c api: model primitives") {
  CHECK(qkd_delta_from_cmrr(46.0) ==
        doctest::Approx(2.5059361681363623e-3).epsilon(1e-12));
  CHECK(qkd_cmrr_from_delta(qkd_delta_from_cmrr(46.0)) ==
        doctest::Approx(46.0).epsilon(1e-12));
  CHECK(std::isinf(qkd_cmrr_from_delta(0.0)));

  double out = 0.0;
  REQUIRE(qkd_imbalance_delta(0.5, 0.5, 1.01, 0.99, &out) == QKD_OK);
  CHECK(out == doctest::Approx(oracle::delta_exact(0.5, 0.5, 1.01, 0.99))
                   .epsilon(1e-12));
  CHECK(qkd_imbalance_delta(0.0, 0.0, 1.0, 1.0, &out) ==
        QKD_ERR_INVALID_ARGUMENT);

  REQUIRE(qkd_overlap_noise(16.9, 100e6, 36e6, &out) == QKD_OK);
  CHECK(out == doctest::Approx(0.015953109922194182).epsilon(1e-12));

  REQUIRE(qkd_overlap_noise_from_cc(16.9, 0.051, 1, &out) == QKD_OK);
  CHECK(out == doctest::Approx(17.9 * 0.051 * 0.051).epsilon(1e-12));
  REQUIRE(qkd_overlap_noise_from_cc(16.9, 0.051, 2, &out) == QKD_OK);
  CHECK(out == doctest::Approx(2.0 * 17.9 * 0.051 * 0.051).epsilon(1e-12));
}

TEST_CASE("c api: sweeps") {
  ConfigGuard g;
  REQUIRE(qkd_config_parse(kRepetition, &g.cfg) == QKD_OK);
  qkd_sweep* sweep = nullptr;
  REQUIRE(qkd_sweep_run(g.cfg, QKD_SWEEP_REPETITION, 1e6, 60e6, 200, &sweep) ==
          QKD_OK);
  CHECK(qkd_sweep_size(sweep) == 200);

  double x = 0.0;
  qkd_keyrate_result r;
  REQUIRE(qkd_sweep_point(sweep, 0, &x, &r) == QKD_OK);
  CHECK(x == doctest::Approx(1e6));
  CHECK(qkd_sweep_point(sweep, 200, &x, &r) == QKD_ERR_INVALID_ARGUMENT);

  REQUIRE(qkd_sweep_argmax(sweep, &x, &r) == QKD_OK);
  CHECK(x == doctest::Approx(36e6).epsilon(0.06));
  CHECK(r.delta_i_per_second > 0.0);

  double roots[4];
  const size_t n_roots = qkd_sweep_zero_crossings(sweep, roots, 4);
  REQUIRE(n_roots >= 1);
  CHECK(roots[n_roots - 1] == doctest::Approx(46e6).epsilon(0.05));

  double level_x = 0.0;
  REQUIRE(qkd_sweep_level_crossing(sweep, 0.5 * r.delta_i_per_second,
                                   &level_x) == QKD_OK);
  CHECK(level_x < x);
  CHECK(qkd_sweep_level_crossing(sweep, 10.0 * r.delta_i_per_second,
                                 &level_x) == QKD_ERR_DEGENERATE);

  const char* path = "capi_sweep_out.csv";
  REQUIRE(qkd_sweep_write(sweep, path, g.cfg) == QKD_OK);
  {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line, all;
    bool saw_header = false;
    while (std::getline(in, line)) {
      if (line.rfind("repetition_hz,", 0) == 0) saw_header = true;
      all += line + "\n";
    }
    CHECK(saw_header);
    CHECK(all.find("v_a = 16.9") != std::string::npos);
  }
  std::remove(path);
  qkd_sweep_free(sweep);

  SUBCASE("lo sweep needs lo parameters") {
    qkd_sweep* bad = nullptr;
    CHECK(qkd_sweep_run(g.cfg, QKD_SWEEP_LO, 1e6, 1e10, 50, &bad) != QKD_OK);
  }
}

TEST_CASE("c api: LO optimization") {
  ConfigGuard g;
  const char* measured =
      "[modulation]\nv_a = 16.9\n"
      "[channel]\ntransmittance = 0.758\n"
      "[receiver]\neta = 0.44\nbeta = 0.898\n"
      "[lo]\nphotons_per_pulse = 1e8\nfractional_fluctuation = 0\n"
      "[bhd]\nelectronic_noise_coeff = 4e7\nnlo_empirical_coeff = 1.1e-10\n"
      "[noise]\neps_a = 0.056\noverlap = fixed\neps_overlap = 0.044\n"
      "nlo = empirical\nelectronic = coefficient\n";
  REQUIRE(qkd_config_parse(measured, &g.cfg) == QKD_OK);
  double lo_opt = 0.0;
  qkd_keyrate_result r;
  int monotone = -1;
  REQUIRE(qkd_optimize_lo(g.cfg, 1e5, 1e11, &lo_opt, &r, &monotone) == QKD_OK);
  CHECK(monotone == 0);
  CHECK(lo_opt == doctest::Approx(1.3e8).epsilon(0.16));
  CHECK(r.delta_i > 0.0);
}

TEST_CASE("c api: quadratic fit and decomposition") {
  std::vector<double> xs, ys;
  for (double x = 1e8; x <= 9e8; x += 1e8) {
    xs.push_back(x);
    ys.push_back(8.0e-20 * x * x + 7.0e-10 * x + 0.028);
  }
  qkd_quadratic_fit fit;
  REQUIRE(qkd_fit_quadratic(xs.data(), ys.data(), xs.size(), &fit) == QKD_OK);
  CHECK(fit.a == doctest::Approx(8.0e-20).epsilon(1e-9));
  CHECK(fit.b == doctest::Approx(7.0e-10).epsilon(1e-9));
  CHECK(fit.c == doctest::Approx(0.028).epsilon(1e-9));

  double c_ele = 0.0, c_lo = 0.0;
  REQUIRE(qkd_decompose_noise(&fit, &c_ele, &c_lo) == QKD_OK);
  CHECK(c_ele == doctest::Approx(4.0e7).epsilon(1e-9));
  CHECK(c_lo == doctest::Approx(8.0e-20 / 7.0e-10).epsilon(1e-9));

  CHECK(qkd_fit_quadratic(xs.data(), ys.data(), 2, &fit) ==
        QKD_ERR_INVALID_ARGUMENT);
  fit.b = 0.0;
  CHECK(qkd_decompose_noise(&fit, &c_ele, &c_lo) == QKD_ERR_INVALID_ARGUMENT);
}

TEST_CASE("c api: monte carlo traces") {
  ConfigGuard g;
  REQUIRE(qkd_config_parse(kSim, &g.cfg) == QKD_OK);

  qkd_sim_params sp;
  REQUIRE(qkd_sim_params_resolve(g.cfg, &sp) == QKD_OK);
  CHECK(sp.tau_s == doctest::Approx(5e-9));
  CHECK(sp.n_pulses == 200);
  CHECK(sp.seed == 42);
  CHECK(sp.delta == doctest::Approx(0.0));

  qkd_trace* trace = nullptr;
  REQUIRE(qkd_mc_simulate(g.cfg, 0, &trace) == QKD_OK);
  CHECK(qkd_trace_n_pulses(trace) == 200);

  SUBCASE("seed override changes the trace deterministically") {
    qkd_trace* t2 = nullptr;
    REQUIRE(qkd_mc_simulate(g.cfg, 42, &t2) == QKD_OK);
    double q1[200], q2[200];
    size_t n1 = 0, n2 = 0;
    REQUIRE(qkd_trace_quadratures(trace, 80e-9, q1, 200, &n1) == QKD_OK);
    REQUIRE(qkd_trace_quadratures(t2, 80e-9, q2, 200, &n2) == QKD_OK);
    REQUIRE(n1 == n2);
    for (size_t i = 0; i < n1; ++i) CHECK(q1[i] == q2[i]);
    qkd_trace_free(t2);

    qkd_trace* t3 = nullptr;
    REQUIRE(qkd_mc_simulate(g.cfg, 43, &t3) == QKD_OK);
    REQUIRE(qkd_trace_quadratures(t3, 80e-9, q2, 200, &n2) == QKD_OK);
    bool any_diff = false;
    for (size_t i = 0; i < n1; ++i)
      if (q1[i] != q2[i]) any_diff = true;
    CHECK(any_diff);
    qkd_trace_free(t3);
  }
  SUBCASE("quadrature capacity is reported") {
    double small[10];
    size_t n = 0;
    CHECK(qkd_trace_quadratures(trace, 80e-9, small, 10, &n) ==
          QKD_ERR_INVALID_ARGUMENT);
  }
  SUBCASE("cc on a shot-noise trace is defined and small") {
    double cc = 0.0;
    REQUIRE(qkd_trace_cc(trace, 80e-9, &cc) == QKD_OK);
    CHECK(std::abs(cc) < 0.25);  // 200 pulses, loose bound
  }
  SUBCASE("save and load round trip") {
    const char* path = "capi_trace_out.txt";
    REQUIRE(qkd_trace_save(trace, path) == QKD_OK);
    qkd_trace* loaded = nullptr;
    REQUIRE(qkd_trace_load(path, 12.5e6, &loaded) == QKD_OK);
    CHECK(qkd_trace_n_pulses(loaded) == 200);
    qkd_trace_free(loaded);
    std::remove(path);

    qkd_trace* missing = nullptr;
    CHECK(qkd_trace_load("no_such_trace.txt", 12.5e6, &missing) == QKD_ERR_IO);
  }
  qkd_trace_free(trace);

  SUBCASE("correlation of a constant series is degenerate") {
    double vals[50];
    for (double& v : vals) v = 3.0;
    double cc = 0.0;
    CHECK(qkd_correlation_coefficient(vals, 50, &cc) == QKD_ERR_DEGENERATE);
    CHECK(qkd_correlation_coefficient(vals, 2, &cc) ==
          QKD_ERR_INVALID_ARGUMENT);
  }
  SUBCASE("noise scan runs at the requested levels") {
    const double levels[3] = {2e5, 1e6, 5e6};
    double vars[3] = {0, 0, 0};
    REQUIRE(qkd_mc_noise_scan(g.cfg, 0, levels, 3, vars) == QKD_OK);
    CHECK(vars[0] > 0.0);
    CHECK(vars[0] < vars[1]);
    CHECK(vars[1] < vars[2]);
  }
}

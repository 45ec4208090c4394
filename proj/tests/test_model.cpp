#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "model.hpp"
#include "oracle.hpp"

using namespace qkdbhd;

TEST_CASE("equivalent input noise") {
  SUBCASE("lossless noiseless limit") {
    const auto noise = equivalent_input_noise({}, {1.0}, {1.0, 1.0});
    CHECK(noise.chi == doctest::Approx(0.0));
    CHECK(noise.eps == 0.0);
    CHECK(noise.eps_e == 0.0);
  }
  SUBCASE("channel noise only") {
    NoiseBudget budget;
    budget.eps_a = 0.056;
    const auto noise = equivalent_input_noise(budget, {0.758}, {0.44, 0.898});
    const double eta_g = 0.44 * 0.758;
    CHECK(noise.chi ==
          doctest::Approx((1.0 - eta_g) / eta_g + 0.056).epsilon(1e-12));
    CHECK(noise.chi == doctest::Approx(2.054320940273447).epsilon(1e-12));
  }
  SUBCASE("unit-transmission referral identity") {
    NoiseBudget budget;
    budget.n_ele = 0.045;
    const auto noise = equivalent_input_noise(budget, {1.0}, {1.0, 1.0});
    CHECK(noise.chi == doctest::Approx(0.045).epsilon(1e-12));
    CHECK(noise.eps_e == 0.0);
  }
  SUBCASE("input/output referral per component") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.05, 1.0);
    for (int i = 0; i < 200; ++i) {
      ChannelParams ch{uni(rng)};
      ReceiverParams rx{uni(rng), 1.0};
      NoiseBudget budget;
      budget.n_lo = uni(rng);
      budget.n_leak = uni(rng);
      budget.n_ele = uni(rng);
      const double eta_g = rx.eta * ch.transmittance_g;
      const auto noise = equivalent_input_noise(budget, ch, rx);
      // input-referred(X) * eta G == output-referred(X)
      const double input_referred_sum = noise.eps - 0.0;
      CHECK(input_referred_sum * eta_g ==
            doctest::Approx(budget.n_lo + budget.n_leak + budget.n_ele)
                .epsilon(1e-12));
    }
  }
  SUBCASE("chi strictly decreasing in G and eta") {
    NoiseBudget budget;
    budget.n_ele = 0.1;
    budget.eps_a = 0.05;
    double prev = equivalent_input_noise(budget, {0.1}, {0.5, 1.0}).chi;
    for (double g = 0.2; g <= 1.0; g += 0.1) {
      const double chi = equivalent_input_noise(budget, {g}, {0.5, 1.0}).chi;
      CHECK(chi < prev);
      prev = chi;
    }
    prev = equivalent_input_noise(budget, {0.5}, {0.1, 1.0}).chi;
    for (double eta = 0.2; eta <= 1.0; eta += 0.1) {
      const double chi = equivalent_input_noise(budget, {0.5}, {eta, 1.0}).chi;
      CHECK(chi < prev);
      prev = chi;
    }
  }
  SUBCASE("invalid transmission rejected") {
    CHECK_THROWS_AS(equivalent_input_noise({}, {0.0}, {1.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(equivalent_input_noise({}, {1.0}, {0.0, 1.0}),
                    std::invalid_argument);
  }
}

TEST_CASE("overlap noise") {
  const ModulationParams mod{16.9};
  CHECK(overlap_noise(mod, 100e6, 36e6) ==
        doctest::Approx(0.015953109922194182).epsilon(1e-12));
  CHECK(overlap_noise(mod, 100e6, 1e6) < 1e-300);  // slow repetition
  CHECK(overlap_noise(mod, 50e6, 50e6) ==
        doctest::Approx(2.0 * 17.9 / std::exp(1.0)).epsilon(1e-12));

  SUBCASE("monotone increasing in R and V_A") {
    double prev = 0.0;
    for (double r = 10e6; r <= 100e6; r += 10e6) {
      const double eps = overlap_noise(mod, 100e6, r);
      CHECK(eps > prev);
      prev = eps;
    }
    CHECK(overlap_noise({20.0}, 100e6, 36e6) > overlap_noise(mod, 100e6, 36e6));
  }
  SUBCASE("matches the reference formula on random inputs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(0.1, 3.0);
    for (int i = 0; i < 100; ++i) {
      const double v_a = uni(rng) * 10.0;
      const double b = uni(rng) * 1e8;
      const double r = uni(rng) * 1e7;
      CHECK(overlap_noise({v_a}, b, r) ==
            doctest::Approx(oracle::overlap(v_a, b, r)).epsilon(1e-12));
    }
  }
}

TEST_CASE("overlap noise from correlation coefficient") {
  const ModulationParams mod{16.9};
  CHECK(overlap_noise_from_cc(mod, 0.0, 1) == 0.0);
  CHECK(overlap_noise_from_cc(mod, 0.051, 1) ==
        doctest::Approx(17.9 * 0.051 * 0.051).epsilon(1e-12));
  CHECK(overlap_noise_from_cc(mod, 0.051, 2) ==
        doctest::Approx(2.0 * 17.9 * 0.051 * 0.051).epsilon(1e-12));
  CHECK_THROWS_AS(overlap_noise_from_cc(mod, 1.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(overlap_noise_from_cc(mod, 0.1, 3), std::invalid_argument);
}

TEST_CASE("imbalance delta") {
  CHECK(imbalance_delta({0.5, 0.5, 1.0, 1.0}) == 0.0);
  CHECK(imbalance_delta({0.5, 0.5, 2.5, 2.5}) == 0.0);
  CHECK(imbalance_delta({1.0, 0.0, 1.0, 1.0}) == doctest::Approx(1.0));
  CHECK(imbalance_delta({0.5, 0.5, 1.01, 0.99}) ==
        doctest::Approx(0.01 / std::sqrt((1.01 * 1.01 + 0.99 * 0.99) * 0.5))
            .epsilon(1e-12));

  SUBCASE("diagnostic decomposition approximates delta when near balance") {
    const SplitterGains sg{0.5, 0.5, 1.01, 0.99};
    const auto d = imbalance_decomposition(sg);
    CHECK(d.delta_opt == doctest::Approx(0.0));
    CHECK(d.delta_el == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(imbalance_delta(sg) ==
          doctest::Approx(d.delta_opt + d.delta_el).epsilon(1e-3));
  }
  SUBCASE("arm swap negates delta") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(0.3, 0.7);
    for (int i = 0; i < 100; ++i) {
      const double t2 = uni(rng);
      const double g1 = uni(rng) + 0.5, g2 = uni(rng) + 0.5;
      const double d1 = imbalance_delta({t2, 1.0 - t2, g1, g2});
      const double d2 = imbalance_delta({1.0 - t2, t2, g2, g1});
      CHECK(d1 == doctest::Approx(-d2).epsilon(1e-12));
    }
  }
  SUBCASE("non-physical tuples rejected") {
    CHECK_THROWS_AS(imbalance_delta({0.6, 0.5, 1.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(imbalance_delta({0.5, 0.5, 0.0, 1.0}),
                    std::invalid_argument);
  }
}

TEST_CASE("CMRR conversions") {
  CHECK(cmrr_from_delta(0.5) == doctest::Approx(0.0));
  CHECK(delta_from_cmrr(46.0) ==
        doctest::Approx(2.5059361681363623e-3).epsilon(1e-12));
  CHECK(std::isinf(cmrr_from_delta(0.0)));
  CHECK(delta_from_cmrr(std::numeric_limits<double>::infinity()) == 0.0);
  CHECK(cmrr_from_delta(-0.5) == doctest::Approx(0.0));  // |delta| convention

  SUBCASE("round trip over [1e-6, 0.5]") {
    for (double d = 1e-6; d <= 0.5; d *= 1.7) {
      CHECK(delta_from_cmrr(cmrr_from_delta(d)) ==
            doctest::Approx(d).epsilon(1e-9));
    }
    CHECK(delta_from_cmrr(cmrr_from_delta(0.5)) ==
          doctest::Approx(0.5).epsilon(1e-9));
  }
}

TEST_CASE("LO fluctuation noise") {
  CHECK(lo_fluctuation_noise({1e8, 0.0}, 0.1) == 0.0);
  CHECK(lo_fluctuation_noise({1e8, 0.01}, 0.0) == 0.0);
  CHECK(lo_fluctuation_noise({1e8, 0.01}, delta_from_cmrr(46.0)) ==
        doctest::Approx(6.279716078773954e-2).epsilon(1e-12));

  SUBCASE("strictly increasing in I_LO, f^2, delta^2") {
    CHECK(lo_fluctuation_noise({2e8, 0.01}, 0.01) >
          lo_fluctuation_noise({1e8, 0.01}, 0.01));
    CHECK(lo_fluctuation_noise({1e8, 0.02}, 0.01) >
          lo_fluctuation_noise({1e8, 0.01}, 0.01));
    CHECK(lo_fluctuation_noise({1e8, 0.01}, 0.02) >
          lo_fluctuation_noise({1e8, 0.01}, 0.01));
    // sign of delta is irrelevant
    CHECK(lo_fluctuation_noise({1e8, 0.01}, -0.01) ==
          lo_fluctuation_noise({1e8, 0.01}, 0.01));
  }
}

TEST_CASE("electronic noise") {
  CHECK(electronic_noise({8.5e8, 0.0}, 4.0e7) ==
        doctest::Approx(4.0e7 / 8.5e8).epsilon(1e-12));
  // shot/electronic ratio ~13 dB at the measured LO level
  CHECK(10.0 * std::log10(1.0 / electronic_noise({8.5e8, 0.0}, 4.0e7)) ==
        doctest::Approx(13.27).epsilon(1e-3));
  CHECK(electronic_noise({1e8, 0.0}, 0.0) == 0.0);
  CHECK(electronic_noise({2e8, 0.0}, 4.0e7) ==
        doctest::Approx(0.5 * electronic_noise({1e8, 0.0}, 4.0e7)));
  CHECK_THROWS_AS(electronic_noise({0.0, 0.0}, 4.0e7), std::invalid_argument);
}

TEST_CASE("budget assembly follows the configured models") {
  SystemParams p;
  p.modulation.v_a = 16.9;
  p.channel.transmittance_g = 0.758;
  p.receiver = {0.44, 0.898};
  p.eps_a = 0.056;
  p.n_ele_fixed = 0.045;
  p.bhd.bandwidth_hz = 100e6;
  p.repetition_hz = 36e6;

  SUBCASE("bandwidth overlap") {
    p.overlap_model = OverlapModel::bandwidth;
    const NoiseBudget b = assemble_budget(p);
    CHECK(b.eps_overlap ==
          doctest::Approx(overlap_noise(p.modulation, 100e6, 36e6)));
    CHECK(b.n_ele == 0.045);
    CHECK(b.n_lo == 0.0);
  }
  SUBCASE("empirical N_LO and coefficient electronics") {
    p.lo = {8.5e8, 0.01};
    p.nlo_model = NloModel::empirical;
    p.bhd.nlo_empirical_coeff = 1.1e-10;
    p.ele_model = EleModel::coefficient;
    p.bhd.electronic_noise_coeff = 4.0e7;
    const NoiseBudget b = assemble_budget(p);
    CHECK(b.n_lo == doctest::Approx(0.0935).epsilon(1e-12));
    CHECK(b.n_ele == doctest::Approx(4.0e7 / 8.5e8).epsilon(1e-12));
  }
  SUBCASE("physical N_LO requires an imbalance") {
    p.nlo_model = NloModel::physical;
    p.lo = {1e8, 0.01};
    CHECK_THROWS_AS(assemble_budget(p), std::invalid_argument);
    p.bhd.set_delta_from_cmrr(46.0);
    const NoiseBudget b = assemble_budget(p);
    CHECK(b.n_lo == doctest::Approx(6.279716078773954e-2).epsilon(1e-12));
  }
}

TEST_CASE("channel from distance matches the dB formula") {
  const ChannelParams ch = ChannelParams::from_distance(20.0, 0.21);
  CHECK(ch.transmittance_g ==
        doctest::Approx(std::pow(10.0, -0.21 * 20.0 / 10.0)).epsilon(1e-12));
  CHECK(ChannelParams::from_distance(0.0, 0.21).transmittance_g == 1.0);
}

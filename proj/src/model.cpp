#include "model.hpp"

#include <limits>
#include <sstream>

namespace qkdbhd {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument(what);
}

void require(bool ok, const std::string& what) {
  if (!ok) fail(what);
}

}  // namespace

void ModulationParams::validate() const {
  require(std::isfinite(v_a) && v_a > 0.0, "modulation: v_a must be > 0");
}

ChannelParams ChannelParams::from_distance(double distance_km,
                                           double loss_db_per_km) {
  require(distance_km >= 0.0, "channel: distance_km must be >= 0");
  require(loss_db_per_km > 0.0, "channel: loss_db_per_km must be > 0");
  ChannelParams ch;
  ch.transmittance_g = std::pow(10.0, -loss_db_per_km * distance_km / 10.0);
  return ch;
}

void ChannelParams::validate() const {
  require(transmittance_g > 0.0 && transmittance_g <= 1.0,
          "channel: transmittance G must be in (0, 1]");
}

void ReceiverParams::validate() const {
  require(eta > 0.0 && eta <= 1.0, "receiver: eta must be in (0, 1]");
  require(beta > 0.0 && beta <= 1.0, "receiver: beta must be in (0, 1]");
}

void LoParams::validate() const {
  require(photons_per_pulse > 0.0, "lo: photons_per_pulse must be > 0");
  require(fractional_fluctuation >= 0.0,
          "lo: fractional_fluctuation must be >= 0");
}

void BhdParams::set_delta_from_cmrr(double cmrr_db) {
  delta = delta_from_cmrr(cmrr_db);
}

void BhdParams::set_delta_from_splitter(const SplitterGains& sg) {
  delta = imbalance_delta(sg);
}

void BhdParams::validate() const {
  require(bandwidth_hz > 0.0, "bhd: bandwidth_hz must be > 0");
  require(electronic_noise_coeff >= 0.0,
          "bhd: electronic_noise_coeff must be >= 0");
  if (nlo_empirical_coeff)
    require(*nlo_empirical_coeff >= 0.0,
            "bhd: nlo_empirical_coeff must be >= 0");
}

void NoiseBudget::validate() const {
  require(eps_a >= 0.0 && eps_overlap >= 0.0 && n_lo >= 0.0 && n_leak >= 0.0 &&
              n_ele >= 0.0,
          "noise budget: all components must be >= 0");
}

void SystemParams::validate() const {
  modulation.validate();
  channel.validate();
  receiver.validate();
  bhd.validate();
  require(eps_a >= 0.0, "noise: eps_a must be >= 0");
  require(n_leak >= 0.0, "noise: n_leak must be >= 0");
  if (overlap_model == OverlapModel::bandwidth)
    require(repetition_hz > 0.0,
            "run: repetition rate required for bandwidth overlap model");
  if (overlap_model == OverlapModel::fixed)
    require(eps_overlap_fixed >= 0.0, "noise: eps_overlap must be >= 0");
  if (ele_model == EleModel::fixed)
    require(n_ele_fixed >= 0.0, "noise: n_ele must be >= 0");
  if (nlo_model != NloModel::none || ele_model == EleModel::coefficient)
    lo.validate();
  if (nlo_model == NloModel::physical)
    require(bhd.delta.has_value(),
            "bhd: imbalance (delta, tuple, or cmrr_db) required for the "
            "physical N_LO model");
  if (nlo_model == NloModel::empirical)
    require(bhd.nlo_empirical_coeff.has_value(),
            "bhd: nlo_empirical_coeff required for the empirical N_LO model");
}

EquivalentNoise equivalent_input_noise(const NoiseBudget& budget,
                                       const ChannelParams& channel,
                                       const ReceiverParams& receiver) {
  budget.validate();
  channel.validate();
  receiver.validate();
  const double eta_g = receiver.eta * channel.transmittance_g;
  if (eta_g <= 0.0) fail("equivalent_input_noise: eta*G must be positive");

  EquivalentNoise out;
  out.eps_e = budget.eps_a + budget.eps_overlap +
              (budget.n_lo + budget.n_leak) / eta_g;
  out.eps = out.eps_e + budget.n_ele / eta_g;
  out.chi = (1.0 - eta_g) / eta_g + out.eps;
  return out;
}

double overlap_noise(const ModulationParams& mod, double bandwidth_hz,
                     double repetition_hz) {
  mod.validate();
  require(bandwidth_hz > 0.0, "overlap_noise: bandwidth must be > 0");
  require(repetition_hz > 0.0, "overlap_noise: repetition rate must be > 0");
  const double ratio = bandwidth_hz / repetition_hz;
  return 2.0 * mod.v() * std::exp(-ratio * ratio);
}

double overlap_noise_from_cc(const ModulationParams& mod, double cc,
                             int neighbors) {
  mod.validate();
  require(std::abs(cc) <= 1.0, "overlap_noise_from_cc: |cc| must be <= 1");
  require(neighbors == 1 || neighbors == 2,
          "overlap_noise_from_cc: neighbors must be 1 or 2");
  return neighbors * mod.v() * cc * cc;
}

double imbalance_delta(const SplitterGains& sg) {
  require(std::abs(sg.t2 + sg.r2 - 1.0) <= 1e-9,
          "imbalance_delta: t^2 + r^2 must equal 1");
  require(sg.g1 > 0.0 && sg.g2 > 0.0, "imbalance_delta: gains must be > 0");
  const double denom2 = sg.g1 * sg.g1 * sg.t2 + sg.g2 * sg.g2 * sg.r2;
  if (denom2 <= 0.0) fail("imbalance_delta: zero denominator");
  return (sg.g1 * sg.t2 - sg.g2 * sg.r2) / std::sqrt(denom2);
}

ImbalanceDecomposition imbalance_decomposition(const SplitterGains& sg) {
  require(sg.g1 + sg.g2 > 0.0, "imbalance_decomposition: gains must be > 0");
  return {sg.t2 - sg.r2, (sg.g1 - sg.g2) / (sg.g1 + sg.g2)};
}

double cmrr_from_delta(double delta) {
  // Sign is irrelevant to noise power; the magnitude sets the CMRR.
  const double d = std::abs(delta);
  if (d == 0.0) return std::numeric_limits<double>::infinity();
  return -20.0 * std::log10(2.0 * d);
}

double delta_from_cmrr(double cmrr_db) {
  require(std::isfinite(cmrr_db) || cmrr_db > 0.0,
          "delta_from_cmrr: CMRR must be finite or +inf");
  if (std::isinf(cmrr_db)) return 0.0;
  return std::pow(10.0, -cmrr_db / 20.0) / 2.0;
}

double lo_fluctuation_noise(const LoParams& lo, double delta) {
  lo.validate();
  const double f = lo.fractional_fluctuation;
  return lo.photons_per_pulse * f * f * delta * delta;
}

double electronic_noise(const LoParams& lo, double electronic_noise_coeff) {
  require(lo.photons_per_pulse > 0.0,
          "electronic_noise: photons_per_pulse must be > 0");
  require(electronic_noise_coeff >= 0.0,
          "electronic_noise: coefficient must be >= 0");
  return electronic_noise_coeff / lo.photons_per_pulse;
}

NoiseBudget assemble_budget(const SystemParams& params) {
  params.validate();
  NoiseBudget budget;
  budget.eps_a = params.eps_a;
  budget.n_leak = params.n_leak;

  switch (params.overlap_model) {
    case OverlapModel::none:
      budget.eps_overlap = 0.0;
      break;
    case OverlapModel::bandwidth:
      budget.eps_overlap = overlap_noise(params.modulation,
                                         params.bhd.bandwidth_hz,
                                         params.repetition_hz);
      break;
    case OverlapModel::fixed:
      budget.eps_overlap = params.eps_overlap_fixed;
      break;
  }

  switch (params.nlo_model) {
    case NloModel::none:
      budget.n_lo = 0.0;
      break;
    case NloModel::physical:
      budget.n_lo = lo_fluctuation_noise(params.lo, *params.bhd.delta);
      break;
    case NloModel::empirical:
      budget.n_lo = *params.bhd.nlo_empirical_coeff * params.lo.photons_per_pulse;
      break;
  }

  switch (params.ele_model) {
    case EleModel::fixed:
      budget.n_ele = params.n_ele_fixed;
      break;
    case EleModel::coefficient:
      budget.n_ele = electronic_noise(params.lo, params.bhd.electronic_noise_coeff);
      break;
  }

  return budget;
}

}  // namespace qkdbhd

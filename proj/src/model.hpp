#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace qkdbhd {

// All noise quantities are dimensionless shot-noise-unit values; photon
// counts are real-valued at the model level.

/// Alice's Gaussian modulation. v_a is the modulation variance in shot-noise
/// units; the prepared quadrature variance is V = v_a + 1.
struct ModulationParams {
  double v_a = 1.0;

  double v() const { return v_a + 1.0; }
  void validate() const;
};

/// Quantum channel efficiency G in (0, 1].
struct ChannelParams {
  double transmittance_g = 1.0;

  static ChannelParams from_distance(double distance_km, double loss_db_per_km);
  void validate() const;
};

/// Bob's receiver: total optical+detector efficiency eta and reconciliation
/// efficiency beta, both in (0, 1].
struct ReceiverParams {
  double eta = 1.0;
  double beta = 1.0;

  void validate() const;
};

/// Local oscillator pulse: mean photon number per pulse and relative RMS
/// intensity fluctuation f.
struct LoParams {
  double photons_per_pulse = 1e8;
  double fractional_fluctuation = 0.0;

  void validate() const;
};

/// Splitter/gain tuple describing the two BHD arms.
struct SplitterGains {
  double t2 = 0.5;  // splitter transmittance squared
  double r2 = 0.5;  // splitter reflectance squared
  double g1 = 1.0;  // time-integrated gain, arm 1
  double g2 = 1.0;  // time-integrated gain, arm 2
};

/// Balanced homodyne detector parameters. The arm imbalance delta may be set
/// directly, derived from a splitter/gain tuple, or derived from a CMRR in
/// dB; all three representations interconvert.
struct BhdParams {
  double bandwidth_hz = 100e6;
  std::optional<double> delta;                // canonical imbalance
  double electronic_noise_coeff = 0.0;        // c_ele: N_ele(out) = c_ele / I_LO
  std::optional<double> nlo_empirical_coeff;  // c_lo: N_LO(out) = c_lo * I_LO

  void set_delta_from_cmrr(double cmrr_db);
  void set_delta_from_splitter(const SplitterGains& sg);
  void validate() const;
};

/// Excess-noise ledger. eps_a and eps_overlap are input-referred; n_lo,
/// n_leak and n_ele are output-referred and divide by eta*G when converted
/// to the input.
struct NoiseBudget {
  double eps_a = 0.0;
  double eps_overlap = 0.0;
  double n_lo = 0.0;
  double n_leak = 0.0;
  double n_ele = 0.0;

  void validate() const;
};

/// Equivalent input noise chi together with the excess-noise intermediates
/// that enter the key-rate formulas.
struct EquivalentNoise {
  double chi;    // total equivalent input noise
  double eps;    // total input-referred excess noise
  double eps_e;  // part attributed to Eve
};

// Selectors for how secret_key_rate assembles the noise budget.
enum class OverlapModel { none, bandwidth, fixed };
enum class NloModel { none, physical, empirical };
enum class EleModel { fixed, coefficient };

/// One complete GMCS QKD operating point.
struct SystemParams {
  ModulationParams modulation;
  ChannelParams channel;
  ReceiverParams receiver;
  LoParams lo;
  BhdParams bhd;
  double repetition_hz = 0.0;  // 0: per-pulse quantities only

  double eps_a = 0.0;   // input-referred, outside Bob's system
  double n_leak = 0.0;  // output-referred, default 0

  OverlapModel overlap_model = OverlapModel::none;
  double eps_overlap_fixed = 0.0;  // used when overlap_model == fixed

  NloModel nlo_model = NloModel::none;

  EleModel ele_model = EleModel::fixed;
  double n_ele_fixed = 0.0;  // output-referred, used when ele_model == fixed

  void validate() const;
};

/// chi = (1 - eta G)/(eta G) + eps_E + N_Bob/(eta G), with
/// eps_E = eps_a + eps_overlap + (n_lo + n_leak)/(eta G) and N_Bob = n_ele.
EquivalentNoise equivalent_input_noise(const NoiseBudget& budget,
                                       const ChannelParams& channel,
                                       const ReceiverParams& receiver);

/// Input-referred excess noise from electrical pulse overlap,
/// 2 (V_A + 1) exp(-B^2 / R^2), for Gaussian pulses of width ~1/B.
double overlap_noise(const ModulationParams& mod, double bandwidth_hz,
                     double repetition_hz);

/// Overlap bound from a measured lag-1 correlation coefficient:
/// neighbors * (V_A + 1) * cc^2.
double overlap_noise_from_cc(const ModulationParams& mod, double cc,
                             int neighbors);

/// Exact arm imbalance delta = (G1 t^2 - G2 r^2) / sqrt(G1^2 t^2 + G2^2 r^2).
double imbalance_delta(const SplitterGains& sg);

/// Near-balanced diagnostic decomposition delta ~ delta_opt + delta_el.
struct ImbalanceDecomposition {
  double delta_opt;  // t^2 - r^2
  double delta_el;   // (G1 - G2)/(G1 + G2)
};
ImbalanceDecomposition imbalance_decomposition(const SplitterGains& sg);

/// CMRR = -20 log10(2 |delta|). Returns +infinity for delta == 0.
double cmrr_from_delta(double delta);

/// Inverse of cmrr_from_delta: delta = 10^(-CMRR/20) / 2.
double delta_from_cmrr(double cmrr_db);

/// Output-referred LO-fluctuation noise I_LO f^2 delta^2.
double lo_fluctuation_noise(const LoParams& lo, double delta);

/// Output-referred electronic noise c_ele / I_LO.
double electronic_noise(const LoParams& lo, double electronic_noise_coeff);

/// Assemble the noise budget for one operating point according to the
/// configured overlap/LO/electronic models.
NoiseBudget assemble_budget(const SystemParams& params);

}  // namespace qkdbhd

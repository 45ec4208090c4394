#pragma once

#include "model.hpp"

namespace qkdbhd {

/// Mutual informations and the reverse-reconciliation key rate for one
/// operating point. delta_i may be negative; callers clamp for display.
struct KeyRateResult {
  double i_ab = 0.0;               // bits/pulse
  double i_be = 0.0;               // bits/pulse
  double delta_i = 0.0;            // bits/pulse, beta*i_ab - i_be
  double delta_i_per_second = 0.0; // bits/s, 0 when no repetition rate given
  double chi = 0.0;
  double eps = 0.0;
  double eps_e = 0.0;
  NoiseBudget budget;              // the budget that produced this result
};

/// I_AB = 1/2 log2[(V + chi)/(1 + chi)].
double mutual_information_ab(const ModulationParams& mod, double chi);

/// Reverse-reconciliation information leaked to Eve:
/// I_BE = 1/2 log2[(eta G V_A + 1 + eta G eps) /
///                 (eta/(1 - G + G eps_E + G/V) + 1 - eta + N_Bob)].
/// n_bob is the output-referred electronic noise.
double eve_information(const ModulationParams& mod,
                       const ChannelParams& channel,
                       const ReceiverParams& receiver, double eps_e,
                       double n_bob, double eps);

/// Key rate from an explicit noise budget.
KeyRateResult secret_key_rate(const ModulationParams& mod,
                              const ChannelParams& channel,
                              const ReceiverParams& receiver,
                              const NoiseBudget& budget,
                              double repetition_hz = 0.0);

/// Key rate for a full operating point; the budget is assembled per the
/// configured noise models.
KeyRateResult secret_key_rate(const SystemParams& params);

}  // namespace qkdbhd

#include "keyrate.hpp"

#include <sstream>

namespace qkdbhd {

double mutual_information_ab(const ModulationParams& mod, double chi) {
  mod.validate();
  if (!(chi >= 0.0))
    throw std::invalid_argument("mutual_information_ab: chi must be >= 0");
  return 0.5 * std::log2((mod.v() + chi) / (1.0 + chi));
}

double eve_information(const ModulationParams& mod,
                       const ChannelParams& channel,
                       const ReceiverParams& receiver, double eps_e,
                       double n_bob, double eps) {
  mod.validate();
  channel.validate();
  receiver.validate();
  const double g = channel.transmittance_g;
  const double eta = receiver.eta;
  const double eta_g = eta * g;

  const double inner = 1.0 - g + g * eps_e + g / mod.v();
  if (!(inner > 0.0)) {
    std::ostringstream os;
    os << "eve_information: channel denominator 1 - G + G*eps_E + G/V = "
       << inner << " is not positive";
    throw std::invalid_argument(os.str());
  }
  const double denom = eta / inner + 1.0 - eta + n_bob;
  if (!(denom > 0.0)) {
    std::ostringstream os;
    os << "eve_information: conditional-variance denominator = " << denom
       << " is not positive";
    throw std::invalid_argument(os.str());
  }
  const double num = eta_g * mod.v_a + 1.0 + eta_g * eps;
  if (!(num > 0.0))
    throw std::invalid_argument("eve_information: non-positive numerator");
  return 0.5 * std::log2(num / denom);
}

KeyRateResult secret_key_rate(const ModulationParams& mod,
                              const ChannelParams& channel,
                              const ReceiverParams& receiver,
                              const NoiseBudget& budget,
                              double repetition_hz) {
  const EquivalentNoise noise = equivalent_input_noise(budget, channel, receiver);
  KeyRateResult result;
  result.budget = budget;
  result.chi = noise.chi;
  result.eps = noise.eps;
  result.eps_e = noise.eps_e;
  result.i_ab = mutual_information_ab(mod, noise.chi);
  result.i_be = eve_information(mod, channel, receiver, noise.eps_e,
                                budget.n_ele, noise.eps);
  result.delta_i = receiver.beta * result.i_ab - result.i_be;
  result.delta_i_per_second =
      repetition_hz > 0.0 ? result.delta_i * repetition_hz : 0.0;
  return result;
}

KeyRateResult secret_key_rate(const SystemParams& params) {
  const NoiseBudget budget = assemble_budget(params);
  return secret_key_rate(params.modulation, params.channel, params.receiver,
                         budget, params.repetition_hz);
}

}  // namespace qkdbhd

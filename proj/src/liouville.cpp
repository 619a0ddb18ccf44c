#include "photonstat/liouville.hpp"

#include <cmath>
#include <variant>

#include "photonstat/errors.hpp"

namespace photonstat {

SuperOp dissipator(const Operator2& c) {
  const Operator2 cdc = c.adjoint() * c;
  return sandwich(c, c.adjoint()) - 0.5 * (left_multiply(cdc) + right_multiply(cdc));
}

Operator2 drive_hamiltonian(const Topology& topology, double n_in) {
  if (!(n_in >= 0.0)) throw ConfigError("incoming photon rate N_in must be non-negative");
  double amplitude = 0.0;
  double detuning = 0.0;
  if (const auto* two = std::get_if<TwoLine>(&topology)) {
    amplitude = std::sqrt(two->ratio * n_in);
    detuning = two->detuning;
  } else {
    amplitude = std::sqrt(0.5 * n_in);
    detuning = std::get<SingleLine>(topology).detuning;
  }
  return amplitude * ops::sigma_x() - 0.5 * detuning * ops::sigma_z();
}

SuperOp liouvillian_at_rate(const Topology& topology, double n_in) {
  const Operator2 h = drive_hamiltonian(topology, n_in);
  double decay = 1.0;
  if (const auto* two = std::get_if<TwoLine>(&topology)) decay = 1.0 + two->ratio;
  SuperOp l = decay * dissipator(ops::sigma_minus());
  // Skip exact zeros so the undriven resonant case is bitwise the dissipator.
  if (h != Operator2::Zero()) l += hamiltonian_generator(h);
  return l;
}

SuperOp build_liouvillian(const DriveSpec& spec, double t) {
  return liouvillian_at_rate(spec.topology, spec.rate(t));
}

SuperOp jump_superop(const Topology& topology) {
  const double weight = std::holds_alternative<TwoLine>(topology) ? 1.0 : 0.5;
  const Operator2 sm = ops::sigma_minus();
  return weight * sandwich(sm, sm.adjoint());
}

std::vector<DecayChannel> decay_channels(const Topology& topology) {
  if (const auto* two = std::get_if<TwoLine>(&topology)) {
    return {{"strong", 1.0, true}, {"weak", two->ratio, false}};
  }
  return {{"left", 0.5, true}, {"right", 0.5, false}};
}

}  // namespace photonstat

#pragma once

#include <string>
#include <vector>

#include "photonstat/drive.hpp"
#include "photonstat/operators.hpp"

namespace photonstat {

/// D(c) rho = c rho c^dagger - (c^dagger c rho + rho c^dagger c) / 2
SuperOp dissipator(const Operator2& c);

/// Drive-frame Hamiltonian c(t) sigma_x - (detuning / 2) sigma_z for a given
/// incoming photon rate N_in.
Operator2 drive_hamiltonian(const Topology& topology, double n_in);

/// Liouvillian at a fixed incoming photon rate; throws ConfigError if n_in < 0.
SuperOp liouvillian_at_rate(const Topology& topology, double n_in);

/// Full Liouvillian L(t) of a drive.
SuperOp build_liouvillian(const DriveSpec& spec, double t);

/// rho -> V+ rho V- for the monitored output channel (reflected field for a
/// single line, strong-line output for two lines).
SuperOp jump_superop(const Topology& topology);
inline SuperOp jump_superop(const DriveSpec& spec) { return jump_superop(spec.topology); }

/// One decay channel of the TLS; every channel has jump operator sigma_minus
/// and rate `weight` in the drive's time units.
struct DecayChannel {
  std::string name;
  double weight = 0.0;
  bool monitored = false;
};

/// Single line: left (monitored) and right, weight 1/2 each.
/// Two lines: strong (monitored, weight 1) and weak (weight a).
std::vector<DecayChannel> decay_channels(const Topology& topology);

}  // namespace photonstat

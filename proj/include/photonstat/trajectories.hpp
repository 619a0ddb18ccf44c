#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "photonstat/drive.hpp"

namespace photonstat {

struct TrajectoryResult {
  std::uint64_t n_traj = 0;
  std::uint64_t seed = 0;
  /// counts[n] = number of trajectories with n monitored-channel jumps.
  std::vector<std::uint64_t> counts;
  std::vector<std::string> channel_names;
  /// Mean jumps per trajectory, per channel (same order as channel_names).
  std::vector<double> per_channel_totals;

  double p_hat(std::size_t n) const;
  /// Binomial standard error sqrt(p_hat (1 - p_hat) / n_traj).
  double stderr_of(std::size_t n) const;
  double mean_count() const;
};

/// Seed of trajectory `index`: SplitMix64 finalizer applied to
/// seed + (index + 1) * 0x9E3779B97F4A7C15. The trajectory then draws from a
/// std::mt19937_64 seeded with this value, converting outputs to uniform
/// doubles in (0, 1) as ((x >> 11) + 0.5) * 2^-53.
std::uint64_t trajectory_seed(std::uint64_t seed, std::uint64_t index);

/// Quantum-jump unraveling of the drive's master equation. Each trajectory
/// carries an unnormalized pure state under H_eff = H - (i/2) Gamma |e><e|
/// and jumps when its squared norm falls to a uniform threshold; the jump
/// instant is refined by bisection and attributed to a channel in
/// proportion to the channel weights. Results do not depend on `threads`.
TrajectoryResult sample_trajectories(const DriveSpec& spec, std::uint64_t n_traj, std::uint64_t seed,
                                     unsigned threads = 1);

}  // namespace photonstat

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "photonstat/operators.hpp"
#include "photonstat/propagator.hpp"

namespace photonstat {

/// Probabilities in [-kClampTolerance, 0) are treated as roundoff and set to 0.
inline constexpr double kClampTolerance = 1e-9;
/// Required probability mass captured by the jump-counting hierarchy.
inline constexpr double kNormalizationTolerance = 1e-6;
/// Step-halving agreement required of time-dependent hierarchy integration.
inline constexpr double kHierarchyConvergence = 1e-8;

enum class StatsMethod { moment_inversion, jump_counting };

const char* to_string(StatsMethod method);

/// Photon-number distribution of the monitored output.
struct PhotonStats {
  /// Binomial moments N_1..N_k; moments[m - 1] = N_m.
  std::vector<double> moments;
  /// P_0..P_k.
  std::vector<double> probabilities;
  std::size_t cutoff_k = 0;
  /// Bound on the probability error from truncating at cutoff_k.
  double tail_bound = 0.0;
  StatsMethod method = StatsMethod::moment_inversion;

  double probability(std::size_t n) const { return n < probabilities.size() ? probabilities[n] : 0.0; }
  double moment(std::size_t m) const {
    if (m == 0) return 1.0;
    return m <= moments.size() ? moments[m - 1] : 0.0;
  }
};

/// Cutoff selection for the moment route: start at initial_k and double until
/// the truncation bound C(k+1, (k+1)/2) * N_{k+1} drops below tail_tolerance.
struct CutoffPolicy {
  std::size_t initial_k = 4;
  std::size_t max_k = 48;
  double tail_tolerance = 1e-8;
};

/// N_1..N_k of the monitored channel over the grid's window, via the
/// auxiliary hierarchy mu_m' = L mu_m + n mu_{m-1}, mu_0 = rho, mu_m(0) = 0.
std::vector<double> binomial_moments(const PropagatorGrid& grid, const SuperOp& jump, std::size_t k);

/// G^(m)(t_1, ..., t_m) = tr[n P(t_m, t_{m-1}) ... n rho(t_1)] for
/// non-decreasing times inside the window.
double correlator(const PropagatorGrid& grid, const SuperOp& jump, std::span<const double> times);

/// P_n = sum_{m=n}^{k} (-1)^{m-n} C(m, n) N_m with N_0 = 1, from N_1..N_k.
/// Throws NumericalError if some P_n < -kClampTolerance.
std::vector<double> invert_moments(std::span<const double> moments);

/// N_m = sum_n C(n, m) P_n for m = 1..max_m.
std::vector<double> moments_from_probabilities(std::span<const double> probabilities,
                                               std::size_t max_m);

/// P_0..P_{n_max} by the jump-resolved counting hierarchy
/// rho_n' = (L - n) rho_n + n rho_{n-1}. Throws NumericalError when the
/// captured mass is below 1 - kNormalizationTolerance.
std::vector<double> counting_distribution(const PropagatorGrid& grid, const SuperOp& jump,
                                          std::size_t n_max);

/// Moment-inversion statistics with automatic cutoff.
PhotonStats moment_stats(const PropagatorGrid& grid, const SuperOp& jump,
                         const CutoffPolicy& policy = {});

/// Jump-counting statistics with n_max = k (no automatic raise).
PhotonStats counting_stats(const PropagatorGrid& grid, const SuperOp& jump, std::size_t k);

/// Binomial coefficient as a double (exact for the small arguments used here).
double binomial(std::size_t n, std::size_t k);

}  // namespace photonstat

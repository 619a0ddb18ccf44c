#pragma once

#include <optional>
#include <vector>

#include "photonstat/drive.hpp"
#include "photonstat/operators.hpp"

namespace photonstat {

/// Local error tolerance of the adaptive RK4 integrator (step doubling).
inline constexpr double kRk4Tolerance = 1e-9;
/// Initial RK4 step is chosen so that ||L||_1 h <= this bound.
inline constexpr double kRk4NormStep = 0.1;

/// Segment lengths within this relative difference share one exponential;
/// aligned grids produce equal nominal lengths that differ only by rounding.
inline constexpr double kSameStep = 1e-9;

/// One grid interval [t0, t1] and its propagator P(t1, t0).
struct Segment {
  double t0 = 0.0;
  double t1 = 0.0;
  SuperOp propagator = SuperOp::Identity();
  /// Set when L is constant on the segment; the propagator is then exp(L h).
  std::optional<SuperOp> generator;
  /// Accepted RK4 step boundaries for time-dependent segments, t0 first, t1 last.
  std::vector<double> substeps;
};

/// Propagators P(t_{j+1}, t_j) and states rho(t_j) on a time grid covering
/// the counting window. Immutable once built.
class PropagatorGrid {
 public:
  PropagatorGrid(DriveSpec spec, std::vector<Segment> segments, std::vector<DensityMatrix> states);

  const DriveSpec& spec() const { return spec_; }
  const std::vector<double>& times() const { return times_; }
  std::size_t segment_count() const { return segments_.size(); }
  const Segment& segment(std::size_t j) const { return segments_[j]; }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<DensityMatrix>& states() const { return states_; }
  const DensityMatrix& state(std::size_t j) const { return states_[j]; }

  /// Index j of the segment with t_j <= t < t_{j+1} (last segment for t_end).
  std::size_t locate(double t) const;

  /// P(t_to, t_from) applied to v, for window times t_from <= t_to.
  OpVector propagate(const OpVector& v, double t_from, double t_to) const;
  /// rho(t) as a vector, for any t in the window.
  OpVector state_vector_at(double t) const;

 private:
  OpVector advance_within(const OpVector& v, std::size_t j, double from, double to) const;

  DriveSpec spec_;
  std::vector<Segment> segments_;
  std::vector<DensityMatrix> states_;
  std::vector<double> times_;
};

/// min(0.01, T / 20) where T is the duration of the drive.
double default_step(const DriveSpec& spec);

/// Grid aligned with every envelope breakpoint, each breakpoint interval split
/// into equal segments no longer than `step`.
std::vector<double> aligned_grid(const DriveSpec& spec, double step);

PropagatorGrid segment_propagators(const DriveSpec& spec, double step);
/// Uses the given grid; throws ConfigError if it does not start at 0, end at
/// t_end, increase strictly, or if a pulse edge falls strictly inside a segment.
PropagatorGrid segment_propagators(const DriveSpec& spec, const std::vector<double>& times);

/// P(t1, t0) computed directly (not from a grid).
SuperOp propagator_between(const DriveSpec& spec, double t0, double t1);

/// rho(t1) from rho(t0) = rho0, re-Hermitized and renormalized.
DensityMatrix evolve_state(const DriveSpec& spec, const DensityMatrix& rho0, double t0, double t1);

DensityMatrix initial_state(const DriveSpec& spec);

/// True if L(t) is constant on [t0, t1] (which must not contain a breakpoint).
bool constant_on(const DriveSpec& spec, double t0, double t1);

/// Adaptive RK4 (step doubling + Richardson) for Y' = L(t) Y on [t0, t1].
/// Appends accepted step boundaries to `substeps` when non-null.
SuperOp integrate_propagator(const DriveSpec& spec, double t0, double t1,
                             std::vector<double>* substeps);

}  // namespace photonstat

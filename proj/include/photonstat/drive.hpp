#pragma once

#include <optional>
#include <variant>
#include <vector>

namespace photonstat {

/// Resonant square pulse: N_in(t) = photons / width on [0, width).
struct SquarePulse {
  double width = 0.1;    // T, relaxation times
  double photons = 0.0;  // N, total mean photon number
};

/// Tabulated N_in(t), linearly interpolated; zero outside [times.front(), times.back()].
struct SampledPulse {
  std::vector<double> times;
  std::vector<double> rates;
};

using Envelope = std::variant<SquarePulse, SampledPulse>;

/// TLS in an infinite line; the reflected (left) output is monitored.
struct SingleLine {
  double detuning = 0.0;  // in units of gamma
};

/// TLS between a strongly and a weakly coupled semi-infinite line; drive enters
/// through the weak line and the strong-line output is monitored.
struct TwoLine {
  double ratio = 1.0;  // a, weak/strong coupling ratio in (0, 1]
  double detuning = 0.0;
};

using Topology = std::variant<SingleLine, TwoLine>;

enum class InitialState { ground, excited };

struct DriveSpec {
  Envelope envelope;
  Topology topology;
  double t_end = 0.0;
  InitialState initial = InitialState::ground;

  /// Builds a validated spec; without an explicit window the counting
  /// interval ends 12 decay constants after the pulse.
  static DriveSpec make(Envelope envelope, Topology topology,
                        std::optional<double> t_end = std::nullopt,
                        InitialState initial = InitialState::ground);

  /// Throws ConfigError when an invariant is violated.
  void validate() const;

  /// Incoming photons per relaxation time at t.
  double rate(double t) const;
  /// End of the drive support.
  double pulse_end() const;
  /// Largest value of N_in over the window.
  double peak_rate() const;
  /// Points where N_in(t) is not smooth, restricted to [0, t_end], sorted,
  /// including 0 and t_end.
  std::vector<double> breakpoints() const;
  bool is_square() const { return std::holds_alternative<SquarePulse>(envelope); }

  bool two_line() const { return std::holds_alternative<TwoLine>(topology); }
  double detuning() const;
  /// Total decay rate 1 (single line) or 1 + a (two lines).
  double total_decay() const;
  /// Coefficient c(t) of sigma_x in the drive Hamiltonian c(t) * sigma_x.
  double drive_amplitude(double t) const;
};

/// Window end used when none is given: T + 12 / total decay.
double default_window_end(const Envelope& envelope, const Topology& topology);

}  // namespace photonstat

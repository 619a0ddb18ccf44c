#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "photonstat/counting.hpp"
#include "photonstat/drive.hpp"

namespace photonstat {

/// Numerical policies shared by every grid point of a sweep.
struct EvalOptions {
  /// Grid step; default_step(spec) when unset.
  std::optional<double> step;
  CutoffPolicy cutoff;
  /// Extra window length added after the default window end.
  double window_extension = 0.0;
  unsigned threads = 1;
};

/// Moment-inversion statistics of the monitored output for one spec.
PhotonStats evaluate_stats(const DriveSpec& spec, const EvalOptions& options = {});

struct SweepRecord {
  double width = 0.0;     // T
  double photons = 0.0;   // N, or N* for optimization sweeps
  double ratio = 0.0;     // a; 0 for a single line
  double detuning = 0.0;
  PhotonStats stats;
  bool optimized = false;
  bool boundary = false;  // maximizer sits on the edge of the scanned range
};

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

struct SweepResult {
  std::string name;
  std::vector<SweepAxis> axes;
  std::vector<SweepRecord> records;
  std::string window_policy;
  std::string cutoff_policy;
};

std::vector<double> linspace(double lo, double hi, std::size_t count);
std::vector<double> logspace(double lo, double hi, std::size_t count);

/// Mean photon number of a resonant square pi-pulse of width T:
/// sqrt(2 N T) = pi for one line, sqrt(4 a N T) = pi for two lines.
double pi_pulse_photons(const Topology& topology, double width);

/// Single-line P_n on the (T, N) product grid, T-major order.
SweepResult sweep_single_line(const std::vector<double>& widths, const std::vector<double>& photons,
                              std::size_t k, const EvalOptions& options = {}, double detuning = 0.0);

/// Fixed-topology, fixed-T scan over N.
SweepResult sweep_photons(const Topology& topology, double width, const std::vector<double>& photons,
                          std::size_t k, const EvalOptions& options = {});

struct MaximizeOptions {
  std::size_t coarse_points = 64;
  double relative_tolerance = 1e-3;
  double tie_tolerance = 1e-9;
};

struct Maximum {
  double photons = 0.0;
  PhotonStats stats;
  bool boundary = false;
  /// Every (N, P_1) pair evaluated, in evaluation order.
  std::vector<std::pair<double, double>> evaluated;
};

/// Coarse scan of P_1 over [n_lo, n_hi] then golden-section refinement of the
/// best bracket to relative width below options.relative_tolerance.
Maximum maximize_p1(const std::function<DriveSpec(double)>& make_spec, double n_lo, double n_hi,
                    const EvalOptions& eval = {}, const MaximizeOptions& options = {});

/// maximize_p1 for a square pulse over [0, 1.5 * widen * pi_pulse_photons].
Maximum maximize_p1_square(const Topology& topology, double width, const EvalOptions& eval = {},
                           double widen = 1.0, const MaximizeOptions& options = {});

/// Maximal P_1 and companions on the (a, T) grid, a-major order.
SweepResult sweep_two_line(const std::vector<double>& ratios, const std::vector<double>& widths,
                           std::size_t k, const EvalOptions& options = {}, double widen = 1.0);

/// Named parameter studies.
SweepResult preset_fig2(const EvalOptions& options = {});
SweepResult preset_fig3(const EvalOptions& options = {});
SweepResult preset_fig4(const EvalOptions& options = {});
SweepResult preset_fig5(const EvalOptions& options = {}, double widen = 1.0);

/// Default grids of the presets.
std::vector<double> default_widths();   // T: log-spaced, 40 points on [0.05, 5]
std::vector<double> default_photons();  // N: linear, 120 points on [0, 120]
std::vector<double> default_ratios();   // a: log-spaced, 30 points on [0.005, 1]

}  // namespace photonstat

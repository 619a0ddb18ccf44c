#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "photonstat/drive.hpp"

namespace photonstat::cli {

enum class TopologyKind { single, two };
enum class PulseKind { square, sampled };
enum class MethodSel { moments, counting, trajectories, all };
enum class OutputFormat { csv, json };
enum class Preset { custom, fig2, fig3, fig4, fig5 };

/// Everything a CLI run needs. JSON config files use flat keys equal to the
/// flag names; flags override file values.
struct RunConfig {
  TopologyKind topology = TopologyKind::single;
  PulseKind pulse = PulseKind::square;
  double T = 0.1;
  double N = 0.0;
  double a = 1.0;
  double delta = 0.0;
  std::optional<std::string> samples;  // CSV of (t, N_in) rows for sampled pulses
  InitialState initial = InitialState::ground;
  MethodSel method = MethodSel::moments;
  std::uint64_t k = 4;
  std::optional<double> t_end;
  std::optional<double> step;
  std::uint64_t seed = 1;
  std::uint64_t n_traj = 100000;
  std::optional<std::string> out;
  OutputFormat format = OutputFormat::csv;
  std::uint64_t threads = 1;
  Preset preset = Preset::custom;
  std::optional<std::string> T_grid;
  std::optional<std::string> N_grid;
  std::optional<std::string> a_grid;
  bool compare = false;
  double widen = 1.0;

  bool operator==(const RunConfig&) const = default;

  /// Throws ConfigError naming the offending key for unknown keys, wrong
  /// types, or invalid enum values; range constraints are checked as well.
  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;

  /// Range checks; throws ConfigError naming the violated constraint.
  void validate() const;

  Topology topology_value() const;
  /// Drive spec of a single simulation (reads the samples file if needed).
  DriveSpec drive_spec() const;
};

/// Known config keys, in serialization order.
const std::vector<std::string>& config_keys();

/// "lo:hi:count" (linear), "lo:hi:count:log", or a comma-separated list.
std::vector<double> parse_grid(const std::string& text, const std::string& key);

/// Two columns t, N_in; blank lines, '#' comments and a non-numeric header are skipped.
SampledPulse read_samples(const std::string& path);

}  // namespace photonstat::cli

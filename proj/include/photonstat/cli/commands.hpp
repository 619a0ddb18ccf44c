#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "photonstat/cli/run_config.hpp"
#include "photonstat/cli/table.hpp"

namespace photonstat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Agreement required between moment inversion and jump counting.
inline constexpr double kDualMethodTolerance = 1e-6;

/// Entry point: `photonstat simulate|sweep|traj [flags]`. args excludes the
/// program name. Output goes to --out or `out`; diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_traj(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace photonstat::cli

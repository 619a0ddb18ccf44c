#include "photonstat/cli/commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <optional>

#include "photonstat/counting.hpp"
#include "photonstat/errors.hpp"
#include "photonstat/liouville.hpp"
#include "photonstat/propagator.hpp"
#include "photonstat/sweeps.hpp"
#include "photonstat/trajectories.hpp"

namespace photonstat::cli {

namespace {

enum class FlagType { text, number, count, boolean };

const std::map<std::string, FlagType>& flag_types() {
  static const std::map<std::string, FlagType> types{
      {"topology", FlagType::text}, {"pulse", FlagType::text},    {"T", FlagType::number},
      {"N", FlagType::number},      {"a", FlagType::number},      {"delta", FlagType::number},
      {"samples", FlagType::text},  {"initial", FlagType::text},  {"method", FlagType::text},
      {"k", FlagType::count},       {"t_end", FlagType::number},  {"step", FlagType::number},
      {"seed", FlagType::count},    {"n_traj", FlagType::count},  {"out", FlagType::text},
      {"format", FlagType::text},   {"threads", FlagType::count}, {"preset", FlagType::text},
      {"T_grid", FlagType::text},   {"N_grid", FlagType::text},   {"a_grid", FlagType::text},
      {"compare", FlagType::boolean}, {"widen", FlagType::number}};
  return types;
}

nlohmann::json flag_value(const std::string& key, FlagType type, const std::string& raw) {
  if (type == FlagType::text) return raw;
  std::size_t used = 0;
  try {
    if (type == FlagType::count) {
      if (raw.empty() || raw[0] == '-') throw std::invalid_argument(raw);
      const unsigned long long v = std::stoull(raw, &used);
      if (used == raw.size()) return static_cast<std::uint64_t>(v);
    } else {
      const double v = std::stod(raw, &used);
      if (used == raw.size()) return v;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("--" + key + ": cannot parse '" + raw + "'");
}

void emit(const RunConfig& config, const Table& table, const nlohmann::ordered_json& extra,
          std::ostream& out) {
  std::ofstream file;
  std::ostream* os = &out;
  if (config.out) {
    file.open(*config.out, std::ios::binary | std::ios::trunc);
    if (!file) throw ConfigError("out: cannot open '" + *config.out + "' for writing");
    os = &file;
  }
  if (config.format == OutputFormat::csv) {
    table.write_csv(*os);
  } else {
    nlohmann::ordered_json j;
    j["config"] = config.to_json();
    j["rows"] = table.rows_json();
    for (const auto& [k, v] : extra.items()) j[k] = v;
    *os << j.dump(2) << '\n';
  }
  os->flush();
  if (!*os) throw NumericalError("failed writing output");
}

EvalOptions eval_options(const RunConfig& config) {
  EvalOptions o;
  o.step = config.step;
  o.cutoff.initial_k = config.k;
  o.threads = static_cast<unsigned>(config.threads);
  return o;
}

// z-score against a reference probability; the standard error is floored at
// 1 / n_traj so empty reference bins stay finite.
double z_score(double p_hat, double p_ref, std::uint64_t n) {
  const double nn = static_cast<double>(n);
  const double se = std::sqrt(std::max(p_ref * (1.0 - p_ref), 1.0 / nn) / nn);
  return (p_hat - p_ref) / se;
}

}  // namespace

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const DriveSpec spec = config.drive_spec();
  const double step = config.step ? *config.step : default_step(spec);
  const PropagatorGrid grid = segment_propagators(spec, step);
  const SuperOp jump = jump_superop(spec);

  const bool want_moments = config.method == MethodSel::moments || config.method == MethodSel::all;
  const bool want_counting = config.method == MethodSel::counting || config.method == MethodSel::all;
  const bool want_traj = config.method == MethodSel::trajectories || config.method == MethodSel::all;

  CutoffPolicy policy;
  policy.initial_k = config.k;
  // The jump-counting route reuses the moment cutoff so both cover the same n.
  const PhotonStats moments = moment_stats(grid, jump, policy);
  std::optional<PhotonStats> counting;
  if (want_counting) counting = counting_stats(grid, jump, moments.cutoff_k);
  std::optional<TrajectoryResult> traj;
  if (want_traj)
    traj = sample_trajectories(spec, config.n_traj, config.seed, static_cast<unsigned>(config.threads));

  std::size_t rows = moments.cutoff_k + 1;
  if (traj) rows = std::max(rows, traj->counts.size());

  Table table;
  table.columns = {"n"};
  if (want_moments) table.columns.insert(table.columns.end(), {"N_n", "P_moments"});
  if (want_counting) table.columns.push_back("P_counting");
  if (want_traj) table.columns.insert(table.columns.end(), {"P_traj", "stderr_traj"});
  for (std::size_t n = 0; n < rows; ++n) {
    std::vector<Cell> row{static_cast<std::uint64_t>(n)};
    if (want_moments) {
      row.emplace_back(moments.moment(n));
      row.emplace_back(moments.probability(n));
    }
    if (counting) row.emplace_back(counting->probability(n));
    if (traj) {
      row.emplace_back(traj->p_hat(n));
      row.emplace_back(traj->stderr_of(n));
    }
    table.add_row(std::move(row));
  }

  nlohmann::ordered_json extra;
  extra["diagnostics"] = {{"cutoff_k", moments.cutoff_k}, {"tail_bound", moments.tail_bound},
                          {"t_end", spec.t_end}, {"step", step}};
  double max_diff = 0.0;
  if (want_moments && counting) {
    for (std::size_t n = 0; n <= moments.cutoff_k; ++n)
      max_diff = std::max(max_diff, std::abs(moments.probability(n) - counting->probability(n)));
    extra["diagnostics"]["max_method_difference"] = max_diff;
  }
  if (traj) extra["diagnostics"]["seed"] = traj->seed;
  emit(config, table, extra, out);

  if (max_diff > kDualMethodTolerance) {
    err << "error: moment inversion and jump counting differ by " << max_diff << " (tolerance "
        << kDualMethodTolerance << ")\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const EvalOptions options = eval_options(config);
  SweepResult result;
  switch (config.preset) {
    case Preset::fig2: result = preset_fig2(options); break;
    case Preset::fig3: result = preset_fig3(options); break;
    case Preset::fig4: result = preset_fig4(options); break;
    case Preset::fig5: result = preset_fig5(options, config.widen); break;
    case Preset::custom: {
      if (config.pulse != PulseKind::square) throw ConfigError("sweep: only square pulses are swept");
      const auto widths = config.T_grid ? parse_grid(*config.T_grid, "T_grid") : std::vector<double>{config.T};
      if (config.topology == TopologyKind::single) {
        const auto photons = config.N_grid ? parse_grid(*config.N_grid, "N_grid") : default_photons();
        result = sweep_single_line(widths, photons, config.k, options, config.delta);
      } else if (config.N_grid) {
        const auto photons = parse_grid(*config.N_grid, "N_grid");
        for (double w : widths) {
          SweepResult part = sweep_photons(config.topology_value(), w, photons, config.k, options);
          result.records.insert(result.records.end(), part.records.begin(), part.records.end());
        }
      } else {
        const auto ratios = config.a_grid ? parse_grid(*config.a_grid, "a_grid") : std::vector<double>{config.a};
        result = sweep_two_line(ratios, widths, config.k, options, config.widen);
      }
      break;
    }
  }

  Table table;
  table.columns = {"T", "N", "a", "P0", "P1", "P2", "P3", "N1", "N2", "tail_bound"};
  for (const auto& r : result.records) {
    if (r.boundary)
      err << "warning: P1 maximum at the edge of the scanned N range (a = " << r.ratio
          << ", T = " << r.width << ")\n";
    table.add_row({r.width, r.photons, r.ratio, r.stats.probability(0), r.stats.probability(1),
                   r.stats.probability(2), r.stats.probability(3), r.stats.moment(1), r.stats.moment(2),
                   r.stats.tail_bound});
  }
  nlohmann::ordered_json extra;
  extra["metadata"] = {{"sweep", result.name},
                       {"window_policy", result.window_policy},
                       {"cutoff_policy", result.cutoff_policy}};
  emit(config, table, extra, out);
  return kExitOk;
}

int cmd_traj(const RunConfig& config, std::ostream& out, std::ostream& /*err*/) {
  const DriveSpec spec = config.drive_spec();
  const TrajectoryResult traj =
      sample_trajectories(spec, config.n_traj, config.seed, static_cast<unsigned>(config.threads));

  std::optional<PhotonStats> reference;
  std::size_t rows = traj.counts.size();
  if (config.compare) {
    const double step = config.step ? *config.step : default_step(spec);
    const PropagatorGrid grid = segment_propagators(spec, step);
    CutoffPolicy policy;
    policy.initial_k = config.k;
    const PhotonStats m = moment_stats(grid, jump_superop(spec), policy);
    reference = counting_stats(grid, jump_superop(spec), std::max<std::size_t>(m.cutoff_k, rows));
    rows = std::max(rows, reference->probabilities.size());
  }

  Table table;
  table.columns = {"n", "count", "p_hat", "stderr", "seed"};
  if (reference) table.columns.insert(table.columns.end(), {"P_counting", "z"});
  for (std::size_t n = 0; n < rows; ++n) {
    const std::uint64_t count = n < traj.counts.size() ? traj.counts[n] : 0;
    std::vector<Cell> row{static_cast<std::uint64_t>(n), count, traj.p_hat(n), traj.stderr_of(n), traj.seed};
    if (reference) {
      row.emplace_back(reference->probability(n));
      row.emplace_back(z_score(traj.p_hat(n), reference->probability(n), traj.n_traj));
    }
    table.add_row(std::move(row));
  }
  nlohmann::ordered_json extra;
  nlohmann::ordered_json channels = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < traj.channel_names.size(); ++c)
    channels[traj.channel_names[c]] = traj.per_channel_totals[c];
  extra["per_channel_totals"] = channels;
  extra["seed"] = traj.seed;
  emit(config, table, extra, out);
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Photon-number statistics of a driven two-level emitter in a waveguide", "photonstat"};
  app.require_subcommand(1);

  struct Command {
    CLI::App* app;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    bool compare = false;
    std::string config_path;
  };
  std::map<std::string, Command> commands;
  for (const char* name : {"simulate", "sweep", "traj"}) {
    const char* desc = std::string(name) == "simulate" ? "compute the photon-number distribution of one spec"
                       : std::string(name) == "sweep"  ? "run a parameter study (fig2|fig3|fig4|fig5|custom)"
                                                       : "Monte Carlo quantum-jump histogram";
    Command& cmd = commands[name];
    cmd.app = app.add_subcommand(name, desc);
    cmd.app->add_option("--config", cmd.config_path, "JSON config with flat keys named like the flags");
    for (const auto& [key, type] : flag_types()) {
      if (type == FlagType::boolean) {
        cmd.options[key] = cmd.app->add_flag("--" + key, cmd.compare, "append counting-method columns");
      } else {
        cmd.options[key] = cmd.app->add_option("--" + key, cmd.values[key]);
      }
    }
  }

  std::vector<const char*> argv{"photonstat"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  for (auto& [name, cmd] : commands) {
    if (!cmd.app->parsed()) continue;
    try {
      nlohmann::json merged = nlohmann::json::object();
      if (!cmd.config_path.empty()) {
        std::ifstream in(cmd.config_path);
        if (!in) throw ConfigError("config: cannot open '" + cmd.config_path + "'");
        try {
          merged = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
          throw ConfigError("config: invalid JSON in '" + cmd.config_path + "': " + e.what());
        }
        if (!merged.is_object()) throw ConfigError("config: top level must be a JSON object");
      }
      for (const auto& [key, type] : flag_types()) {
        if (cmd.options[key]->count() == 0) continue;
        merged[key] = type == FlagType::boolean ? nlohmann::json(cmd.compare)
                                                : flag_value(key, type, cmd.values[key]);
      }
      const RunConfig config = RunConfig::from_json(merged);
      if (name == "simulate") return cmd_simulate(config, out, err);
      if (name == "sweep") return cmd_sweep(config, out, err);
      return cmd_traj(config, out, err);
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << '\n';
      return kExitConfig;
    } catch (const NumericalError& e) {
      err << "numerical failure: " << e.what() << '\n';
      return kExitNumerical;
    } catch (const std::exception& e) {
      err << "failure: " << e.what() << '\n';
      return kExitNumerical;
    }
  }
  return kExitConfig;
}

}  // namespace photonstat::cli

#include "photonstat/cli/run_config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "photonstat/errors.hpp"
#include "photonstat/sweeps.hpp"

namespace photonstat::cli {

namespace {

template <typename E, std::size_t N>
using Names = std::array<std::pair<E, const char*>, N>;

constexpr Names<TopologyKind, 2> kTopologies{{{TopologyKind::single, "single"}, {TopologyKind::two, "two"}}};
constexpr Names<PulseKind, 2> kPulses{{{PulseKind::square, "square"}, {PulseKind::sampled, "sampled"}}};
constexpr Names<InitialState, 2> kInitials{{{InitialState::ground, "ground"}, {InitialState::excited, "excited"}}};
constexpr Names<MethodSel, 4> kMethods{{{MethodSel::moments, "moments"},
                                        {MethodSel::counting, "counting"},
                                        {MethodSel::trajectories, "trajectories"},
                                        {MethodSel::all, "all"}}};
constexpr Names<OutputFormat, 2> kFormats{{{OutputFormat::csv, "csv"}, {OutputFormat::json, "json"}}};
constexpr Names<Preset, 5> kPresets{{{Preset::custom, "custom"},
                                     {Preset::fig2, "fig2"},
                                     {Preset::fig3, "fig3"},
                                     {Preset::fig4, "fig4"},
                                     {Preset::fig5, "fig5"}}};

template <typename E, std::size_t N>
const char* name_of(const Names<E, N>& names, E value) {
  for (const auto& [v, n] : names)
    if (v == value) return n;
  return "?";
}

template <typename E, std::size_t N>
E parse_enum(const Names<E, N>& names, const nlohmann::json& j, const std::string& key) {
  if (!j.is_string()) throw ConfigError("config key '" + key + "' must be a string");
  const auto s = j.get<std::string>();
  std::string allowed;
  for (const auto& [v, n] : names) {
    if (s == n) return v;
    allowed += (allowed.empty() ? "" : "|") + std::string(n);
  }
  throw ConfigError("config key '" + key + "' must be one of " + allowed + " (got '" + s + "')");
}

double get_double(const nlohmann::json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return j.get<double>();
}

std::uint64_t get_uint(const nlohmann::json& j, const std::string& key) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  throw ConfigError("config key '" + key + "' must be a non-negative integer");
}

std::string get_string(const nlohmann::json& j, const std::string& key) {
  if (!j.is_string()) throw ConfigError("config key '" + key + "' must be a string");
  return j.get<std::string>();
}

double parse_number(const std::string& text, const std::string& key) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ConfigError("'" + key + "': cannot parse number '" + text + "'");
  return v;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "topology", "pulse", "T",    "N",      "a",       "delta",  "samples", "initial",
      "method",   "k",     "t_end", "step",  "seed",    "n_traj", "out",     "format",
      "threads",  "preset", "T_grid", "N_grid", "a_grid", "compare", "widen"};
  return keys;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  const auto& keys = config_keys();
  for (const auto& [key, v] : j.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError("unknown config key '" + key + "'");
    if (key == "topology") c.topology = parse_enum(kTopologies, v, key);
    else if (key == "pulse") c.pulse = parse_enum(kPulses, v, key);
    else if (key == "T") c.T = get_double(v, key);
    else if (key == "N") c.N = get_double(v, key);
    else if (key == "a") c.a = get_double(v, key);
    else if (key == "delta") c.delta = get_double(v, key);
    else if (key == "samples") c.samples = get_string(v, key);
    else if (key == "initial") c.initial = parse_enum(kInitials, v, key);
    else if (key == "method") c.method = parse_enum(kMethods, v, key);
    else if (key == "k") c.k = get_uint(v, key);
    else if (key == "t_end") c.t_end = get_double(v, key);
    else if (key == "step") c.step = get_double(v, key);
    else if (key == "seed") c.seed = get_uint(v, key);
    else if (key == "n_traj") c.n_traj = get_uint(v, key);
    else if (key == "out") c.out = get_string(v, key);
    else if (key == "format") c.format = parse_enum(kFormats, v, key);
    else if (key == "threads") c.threads = get_uint(v, key);
    else if (key == "preset") c.preset = parse_enum(kPresets, v, key);
    else if (key == "T_grid") c.T_grid = get_string(v, key);
    else if (key == "N_grid") c.N_grid = get_string(v, key);
    else if (key == "a_grid") c.a_grid = get_string(v, key);
    else if (key == "compare") {
      if (!v.is_boolean()) throw ConfigError("config key 'compare' must be a boolean");
      c.compare = v.get<bool>();
    } else if (key == "widen") c.widen = get_double(v, key);
  }
  c.validate();
  return c;
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["topology"] = name_of(kTopologies, topology);
  j["pulse"] = name_of(kPulses, pulse);
  j["T"] = T;
  j["N"] = N;
  j["a"] = a;
  j["delta"] = delta;
  if (samples) j["samples"] = *samples;
  j["initial"] = name_of(kInitials, initial);
  j["method"] = name_of(kMethods, method);
  j["k"] = k;
  if (t_end) j["t_end"] = *t_end;
  if (step) j["step"] = *step;
  j["seed"] = seed;
  j["n_traj"] = n_traj;
  if (out) j["out"] = *out;
  j["format"] = name_of(kFormats, format);
  j["threads"] = threads;
  j["preset"] = name_of(kPresets, preset);
  if (T_grid) j["T_grid"] = *T_grid;
  if (N_grid) j["N_grid"] = *N_grid;
  if (a_grid) j["a_grid"] = *a_grid;
  j["compare"] = compare;
  j["widen"] = widen;
  return j;
}

void RunConfig::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!(T > 0.0) || !finite(T)) throw ConfigError("T: pulse width must satisfy T > 0");
  if (!(N >= 0.0) || !finite(N)) throw ConfigError("N: photon number must satisfy N >= 0");
  if (!(a > 0.0 && a <= 1.0)) throw ConfigError("a: coupling ratio must satisfy 0 < a <= 1");
  if (!finite(delta)) throw ConfigError("delta: detuning must be finite");
  if (k < 1 || k > 48) throw ConfigError("k: cutoff must satisfy 1 <= k <= 48");
  if (t_end && !(finite(*t_end) && *t_end > 0.0)) throw ConfigError("t_end: window end must be positive");
  if (step && !(finite(*step) && *step > 0.0)) throw ConfigError("step: grid step must be positive");
  if (n_traj < 1) throw ConfigError("n_traj: must be at least 1");
  if (threads < 1 || threads > 1024) throw ConfigError("threads: must satisfy 1 <= threads <= 1024");
  if (!(widen >= 1.0) || !finite(widen)) throw ConfigError("widen: must satisfy widen >= 1");
  if (pulse == PulseKind::sampled && !samples)
    throw ConfigError("samples: a sampled pulse needs a samples file");
  if (T_grid) parse_grid(*T_grid, "T_grid");
  if (N_grid) parse_grid(*N_grid, "N_grid");
  if (a_grid) parse_grid(*a_grid, "a_grid");
}

Topology RunConfig::topology_value() const {
  if (topology == TopologyKind::two) return TwoLine{a, delta};
  return SingleLine{delta};
}

DriveSpec RunConfig::drive_spec() const {
  Envelope env = SquarePulse{T, N};
  if (pulse == PulseKind::sampled) env = read_samples(*samples);
  return DriveSpec::make(env, topology_value(), t_end, initial);
}

std::vector<double> parse_grid(const std::string& text, const std::string& key) {
  std::vector<std::string> parts;
  const char sep = text.find(':') != std::string::npos ? ':' : ',';
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, sep);) parts.push_back(part);
  if (parts.empty()) throw ConfigError("'" + key + "': empty grid");
  if (sep == ',') {
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(parse_number(p, key));
    return out;
  }
  if (parts.size() < 3 || parts.size() > 4 || (parts.size() == 4 && parts[3] != "log" && parts[3] != "lin"))
    throw ConfigError("'" + key + "': expected lo:hi:count[:log]");
  const double lo = parse_number(parts[0], key);
  const double hi = parse_number(parts[1], key);
  const double count = parse_number(parts[2], key);
  if (!(count >= 1.0) || count != std::floor(count) || count > 1e6)
    throw ConfigError("'" + key + "': count must be a positive integer");
  if (!(hi >= lo)) throw ConfigError("'" + key + "': need lo <= hi");
  const auto n = static_cast<std::size_t>(count);
  if (parts.size() == 4 && parts[3] == "log") {
    if (!(lo > 0.0)) throw ConfigError("'" + key + "': log grid needs lo > 0");
    return logspace(lo, hi, n);
  }
  return linspace(lo, hi, n);
}

SampledPulse read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("samples: cannot open '" + path + "'");
  SampledPulse s;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double t = 0.0;
    double r = 0.0;
    if (!(ls >> t >> r)) {
      if (first) {
        first = false;
        continue;
      }
      throw ConfigError("samples: malformed line '" + line + "' in '" + path + "'");
    }
    first = false;
    s.times.push_back(t);
    s.rates.push_back(r);
  }
  return s;
}

}  // namespace photonstat::cli

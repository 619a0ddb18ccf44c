#include "photonstat/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "photonstat/detail/parallel.hpp"
#include "photonstat/errors.hpp"
#include "photonstat/liouville.hpp"
#include "photonstat/propagator.hpp"

namespace photonstat {

namespace {

constexpr double kGolden = 0.6180339887498949;

std::string describe_policies(const EvalOptions& o, std::string* window) {
  std::ostringstream w;
  w << "t_end = T + 12 / (total decay)";
  if (o.window_extension > 0.0) w << " + " << o.window_extension;
  w << "; step = " << (o.step ? std::to_string(*o.step) : std::string("min(0.01, T/20)"));
  *window = w.str();
  std::ostringstream c;
  c << "k from " << o.cutoff.initial_k << " doubling to at most " << o.cutoff.max_k
    << " until C(k+1,(k+1)/2) N_{k+1} < " << o.cutoff.tail_tolerance;
  return c.str();
}

DriveSpec square_spec(const Topology& topology, double width, double photons, double extension) {
  const Envelope env = SquarePulse{width, photons};
  return DriveSpec::make(env, topology, default_window_end(env, topology) + extension);
}

NumericalError at_point(const std::exception& e, double width, double photons, double ratio) {
  std::ostringstream os;
  os << "at T = " << width << ", N = " << photons;
  if (ratio > 0.0) os << ", a = " << ratio;
  os << ": " << e.what();
  return NumericalError(os.str());
}

double ratio_of(const Topology& topology) {
  if (const auto* two = std::get_if<TwoLine>(&topology)) return two->ratio;
  return 0.0;
}

double detuning_of(const Topology& topology) {
  return std::visit([](const auto& t) { return t.detuning; }, topology);
}

}  // namespace

PhotonStats evaluate_stats(const DriveSpec& spec, const EvalOptions& options) {
  const double step = options.step ? *options.step : default_step(spec);
  const PropagatorGrid grid = segment_propagators(spec, step);
  return moment_stats(grid, jump_superop(spec), options.cutoff);
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out;
  if (count == 1) return {lo};
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(i + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  return out;
}

std::vector<double> logspace(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi > 0.0)) throw ConfigError("log-spaced grid needs positive bounds");
  std::vector<double> out;
  if (count == 1) return {lo};
  const double l0 = std::log(lo);
  const double l1 = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    if (i == 0) out.push_back(lo);
    else if (i + 1 == count) out.push_back(hi);
    else out.push_back(std::exp(l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(count - 1)));
  }
  return out;
}

double pi_pulse_photons(const Topology& topology, double width) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  if (const auto* two = std::get_if<TwoLine>(&topology)) return pi2 / (4.0 * two->ratio * width);
  return pi2 / (2.0 * width);
}

SweepResult sweep_single_line(const std::vector<double>& widths, const std::vector<double>& photons,
                              std::size_t k, const EvalOptions& options, double detuning) {
  for (double t : widths)
    if (!(t > 0.0)) throw ConfigError("pulse widths must be positive");
  for (double n : photons)
    if (!(n >= 0.0)) throw ConfigError("photon numbers must be non-negative");
  EvalOptions eval = options;
  eval.cutoff.initial_k = std::max<std::size_t>(k, 3);

  SweepResult result;
  result.name = "single-line";
  result.axes = {{"T", widths}, {"N", photons}};
  result.cutoff_policy = describe_policies(eval, &result.window_policy);
  result.records.resize(widths.size() * photons.size());
  const Topology topology = SingleLine{detuning};
  detail::parallel_for(result.records.size(), options.threads, [&](std::size_t idx) {
    const double width = widths[idx / photons.size()];
    const double n = photons[idx % photons.size()];
    SweepRecord rec;
    rec.width = width;
    rec.photons = n;
    rec.detuning = detuning;
    try {
      rec.stats = evaluate_stats(square_spec(topology, width, n, eval.window_extension), eval);
    } catch (const NumericalError& e) {
      throw at_point(e, width, n, 0.0);
    }
    result.records[idx] = std::move(rec);
  });
  return result;
}

SweepResult sweep_photons(const Topology& topology, double width, const std::vector<double>& photons,
                          std::size_t k, const EvalOptions& options) {
  EvalOptions eval = options;
  eval.cutoff.initial_k = std::max<std::size_t>(k, 3);
  SweepResult result;
  result.name = "photon-scan";
  result.axes = {{"N", photons}};
  result.cutoff_policy = describe_policies(eval, &result.window_policy);
  result.records.resize(photons.size());
  const double ratio = ratio_of(topology);
  detail::parallel_for(photons.size(), options.threads, [&](std::size_t i) {
    SweepRecord rec;
    rec.width = width;
    rec.photons = photons[i];
    rec.ratio = ratio;
    rec.detuning = detuning_of(topology);
    try {
      rec.stats = evaluate_stats(square_spec(topology, width, photons[i], eval.window_extension), eval);
    } catch (const NumericalError& e) {
      throw at_point(e, width, photons[i], ratio);
    }
    result.records[i] = std::move(rec);
  });
  return result;
}

Maximum maximize_p1(const std::function<DriveSpec(double)>& make_spec, double n_lo, double n_hi,
                    const EvalOptions& eval, const MaximizeOptions& options) {
  if (!(n_hi > n_lo) || n_lo < 0.0) throw ConfigError("maximize_p1 needs 0 <= N_lo < N_hi");
  if (options.coarse_points < 3) throw ConfigError("maximize_p1 needs at least 3 coarse points");

  Maximum out;
  std::vector<PhotonStats> stats_of;
  auto evaluate = [&](double n) {
    PhotonStats s = evaluate_stats(make_spec(n), eval);
    out.evaluated.emplace_back(n, s.probability(1));
    stats_of.push_back(std::move(s));
    return out.evaluated.back().second;
  };

  const std::vector<double> coarse = linspace(n_lo, n_hi, options.coarse_points);
  std::vector<double> values(coarse.size());
  for (std::size_t i = 0; i < coarse.size(); ++i) values[i] = evaluate(coarse[i]);
  const double coarse_max = *std::max_element(values.begin(), values.end());
  std::size_t best = 0;
  while (values[best] < coarse_max - options.tie_tolerance) ++best;
  out.boundary = (best == 0 || best + 1 == coarse.size());

  double a = coarse[best == 0 ? 0 : best - 1];
  double b = coarse[std::min(best + 1, coarse.size() - 1)];
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = evaluate(c);
  double fd = evaluate(d);
  while ((b - a) > options.relative_tolerance * std::max(0.5 * (a + b), 1e-12)) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = evaluate(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = evaluate(d);
    }
  }

  double global = -1.0;
  for (const auto& e : out.evaluated) global = std::max(global, e.second);
  std::size_t pick = 0;
  for (std::size_t i = 0; i < out.evaluated.size(); ++i) {
    if (out.evaluated[i].second < global - options.tie_tolerance) continue;
    if (out.evaluated[pick].second < global - options.tie_tolerance ||
        out.evaluated[i].first < out.evaluated[pick].first)
      pick = i;
  }
  out.photons = out.evaluated[pick].first;
  out.stats = stats_of[pick];
  return out;
}

Maximum maximize_p1_square(const Topology& topology, double width, const EvalOptions& eval, double widen,
                           const MaximizeOptions& options) {
  const double hi = 1.5 * widen * pi_pulse_photons(topology, width);
  auto make = [&](double n) { return square_spec(topology, width, n, eval.window_extension); };
  try {
    return maximize_p1(make, 0.0, hi, eval, options);
  } catch (const NumericalError& e) {
    throw at_point(e, width, std::nan(""), ratio_of(topology));
  }
}

SweepResult sweep_two_line(const std::vector<double>& ratios, const std::vector<double>& widths,
                           std::size_t k, const EvalOptions& options, double widen) {
  for (double a : ratios)
    if (!(a > 0.0 && a <= 1.0)) throw ConfigError("coupling ratio must satisfy 0 < a <= 1");
  for (double t : widths)
    if (!(t > 0.0)) throw ConfigError("pulse widths must be positive");
  EvalOptions eval = options;
  eval.cutoff.initial_k = std::max<std::size_t>(k, 3);
  eval.threads = 1;

  SweepResult result;
  result.name = "two-line-max-p1";
  result.axes = {{"a", ratios}, {"T", widths}};
  result.cutoff_policy = describe_policies(eval, &result.window_policy);
  result.records.resize(ratios.size() * widths.size());
  detail::parallel_for(result.records.size(), options.threads, [&](std::size_t idx) {
    const double a = ratios[idx / widths.size()];
    const double width = widths[idx % widths.size()];
    Maximum m = maximize_p1_square(TwoLine{a, 0.0}, width, eval, widen);
    SweepRecord rec;
    rec.width = width;
    rec.photons = m.photons;
    rec.ratio = a;
    rec.stats = std::move(m.stats);
    rec.optimized = true;
    rec.boundary = m.boundary;
    result.records[idx] = std::move(rec);
  });
  return result;
}

std::vector<double> default_widths() { return logspace(0.05, 5.0, 40); }
std::vector<double> default_photons() { return linspace(0.0, 120.0, 120); }
std::vector<double> default_ratios() { return logspace(0.005, 1.0, 30); }

SweepResult preset_fig2(const EvalOptions& options) {
  SweepResult r = sweep_single_line(default_widths(), default_photons(), 4, options);
  r.name = "fig2";
  return r;
}

SweepResult preset_fig3(const EvalOptions& options) {
  SweepResult r = sweep_photons(SingleLine{}, 0.1, default_photons(), 4, options);
  r.name = "fig3";
  return r;
}

SweepResult preset_fig4(const EvalOptions& options) {
  SweepResult r;
  r.name = "fig4";
  for (double a : {0.01, 0.5}) {
    const TwoLine topology{a, 0.0};
    const auto photons = linspace(0.0, 3.0 * pi_pulse_photons(topology, 0.1), 120);
    SweepResult part = sweep_photons(topology, 0.1, photons, 4, options);
    r.axes.push_back({"N(a=" + std::to_string(a) + ")", photons});
    r.window_policy = part.window_policy;
    r.cutoff_policy = part.cutoff_policy;
    r.records.insert(r.records.end(), part.records.begin(), part.records.end());
  }
  return r;
}

SweepResult preset_fig5(const EvalOptions& options, double widen) {
  SweepResult r = sweep_two_line(default_ratios(), default_widths(), 4, options, widen);
  r.name = "fig5";
  return r;
}

}  // namespace photonstat

#include "photonstat/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "photonstat/detail/rk4.hpp"
#include "photonstat/errors.hpp"
#include "photonstat/expm.hpp"
#include "photonstat/liouville.hpp"

namespace photonstat {

namespace {

double norm1(const SuperOp& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

double max_abs_diff(const SuperOp& a, const SuperOp& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Breakpoints strictly inside (t0, t1).
std::vector<double> interior_breakpoints(const DriveSpec& spec, double t0, double t1) {
  std::vector<double> out;
  for (double b : spec.breakpoints())
    if (b > t0 && b < t1) out.push_back(b);
  return out;
}

}  // namespace

bool constant_on(const DriveSpec& spec, double t0, double t1) {
  const double len = t1 - t0;
  const double r1 = spec.rate(t0 + 0.25 * len);
  return r1 == spec.rate(t0 + 0.5 * len) && r1 == spec.rate(t0 + 0.75 * len);
}

SuperOp integrate_propagator(const DriveSpec& spec, double t0, double t1,
                             std::vector<double>* substeps) {
  const double len = t1 - t0;
  if (substeps) substeps->push_back(t0);
  if (len <= 0.0) return SuperOp::Identity();

  const auto rhs = [&spec](double t, const SuperOp& y) -> SuperOp {
    return build_liouvillian(spec, t) * y;
  };
  const double norm = std::max({norm1(build_liouvillian(spec, t0)),
                                norm1(build_liouvillian(spec, t0 + 0.5 * len)),
                                norm1(build_liouvillian(spec, t1))});
  const double count = std::max(1.0, std::ceil(len * norm / kRk4NormStep));
  const double nominal = len / count;
  const double min_step = len * 1e-12;

  SuperOp y = SuperOp::Identity();
  double t = t0;
  double h = nominal;
  while (t < t1) {
    double next = t + h;
    if (next >= t1 || (t1 - next) < 1e-12 * len) next = t1;
    const double step = next - t;
    double err = 0.0;
    SuperOp candidate = detail::rk4_richardson(rhs, t, step, y, max_abs_diff, &err);
    if (err > kRk4Tolerance && step > min_step) {
      h = 0.5 * step;
      continue;
    }
    if (err > kRk4Tolerance) {
      std::ostringstream os;
      os << "RK4 step underflow near t = " << t;
      throw NumericalError(os.str());
    }
    y = candidate;
    t = next;
    if (substeps) substeps->push_back(t);
    if (err < kRk4Tolerance / 64.0) h = std::min(2.0 * step, nominal);
  }
  return y;
}

SuperOp propagator_between(const DriveSpec& spec, double t0, double t1) {
  if (t1 < t0) throw ConfigError("propagation requires t1 >= t0");
  std::vector<double> cuts{t0};
  for (double b : interior_breakpoints(spec, t0, t1)) cuts.push_back(b);
  cuts.push_back(t1);
  SuperOp p = SuperOp::Identity();
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    if (b <= a) continue;
    SuperOp piece;
    if (constant_on(spec, a, b)) {
      piece = expm<SuperOp>(build_liouvillian(spec, 0.5 * (a + b)) * (b - a));
    } else {
      piece = integrate_propagator(spec, a, b, nullptr);
    }
    p = piece * p;
  }
  return p;
}

DensityMatrix initial_state(const DriveSpec& spec) {
  return spec.initial == InitialState::excited ? DensityMatrix::excited() : DensityMatrix::ground();
}

DensityMatrix evolve_state(const DriveSpec& spec, const DensityMatrix& rho0, double t0, double t1) {
  if (t1 < t0) throw ConfigError("evolve_state requires t1 >= t0");
  if (t0 < 0.0 || t1 > spec.t_end) throw ConfigError("evolve_state times must lie in [0, t_end]");
  const OpVector v = propagator_between(spec, t0, t1) * rho0.vec();
  return DensityMatrix::restored(devectorize(v));
}

double default_step(const DriveSpec& spec) {
  double duration = spec.pulse_end();
  if (const auto* s = std::get_if<SampledPulse>(&spec.envelope)) {
    duration = s->times.back() - s->times.front();
  }
  return std::min(0.01, duration / 20.0);
}

std::vector<double> aligned_grid(const DriveSpec& spec, double step) {
  if (!(step > 0.0)) throw ConfigError("grid step must be positive");
  const std::vector<double> bp = spec.breakpoints();
  std::vector<double> times;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const double a = bp[i];
    const double b = bp[i + 1];
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / step - 1e-9)));
    for (std::size_t j = 0; j < n; ++j) times.push_back(a + (b - a) * static_cast<double>(j) / n);
  }
  times.push_back(bp.back());
  return times;
}

PropagatorGrid segment_propagators(const DriveSpec& spec, double step) {
  return segment_propagators(spec, aligned_grid(spec, step));
}

PropagatorGrid segment_propagators(const DriveSpec& spec, const std::vector<double>& times) {
  if (times.size() < 2) throw ConfigError("propagator grid needs at least two points");
  if (times.front() != 0.0 || times.back() != spec.t_end)
    throw ConfigError("propagator grid must span [0, t_end]");
  for (std::size_t j = 0; j + 1 < times.size(); ++j)
    if (!(times[j + 1] > times[j])) throw ConfigError("propagator grid must increase strictly");
  for (double b : spec.breakpoints()) {
    const auto it = std::upper_bound(times.begin(), times.end(), b);
    if (it == times.begin() || it == times.end()) continue;
    const double lo = *(it - 1);
    const double hi = *it;
    const double tol = 1e-12 * std::max(1.0, std::abs(b));
    if (b - lo > tol && hi - b > tol) {
      std::ostringstream os;
      os << "grid misalignment: pulse edge t = " << b << " falls inside segment [" << lo << ", "
         << hi << "]";
      throw ConfigError(os.str());
    }
  }

  std::vector<Segment> segments;
  segments.reserve(times.size() - 1);
  double cached_rate = -1.0;
  double cached_h = -1.0;
  SuperOp cached_generator = SuperOp::Zero();
  SuperOp cached_propagator = SuperOp::Identity();
  for (std::size_t j = 0; j + 1 < times.size(); ++j) {
    Segment seg;
    seg.t0 = times[j];
    seg.t1 = times[j + 1];
    const double h = seg.t1 - seg.t0;
    if (constant_on(spec, seg.t0, seg.t1)) {
      const double rate = spec.rate(0.5 * (seg.t0 + seg.t1));
      if (rate != cached_rate || std::abs(h - cached_h) > kSameStep * h) {
        cached_rate = rate;
        cached_h = h;
        cached_generator = liouvillian_at_rate(spec.topology, rate);
        cached_propagator = expm<SuperOp>(cached_generator * h);
      }
      seg.generator = cached_generator;
      seg.propagator = cached_propagator;
    } else {
      seg.propagator = integrate_propagator(spec, seg.t0, seg.t1, &seg.substeps);
    }
    segments.push_back(std::move(seg));
  }

  std::vector<DensityMatrix> states;
  states.reserve(times.size());
  states.push_back(initial_state(spec));
  for (const auto& seg : segments) {
    states.push_back(DensityMatrix::restored(devectorize(seg.propagator * states.back().vec())));
  }
  return PropagatorGrid(spec, std::move(segments), std::move(states));
}

PropagatorGrid::PropagatorGrid(DriveSpec spec, std::vector<Segment> segments,
                               std::vector<DensityMatrix> states)
    : spec_(std::move(spec)), segments_(std::move(segments)), states_(std::move(states)) {
  times_.reserve(segments_.size() + 1);
  for (const auto& s : segments_) times_.push_back(s.t0);
  times_.push_back(segments_.empty() ? 0.0 : segments_.back().t1);
}

std::size_t PropagatorGrid::locate(double t) const {
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return 0;
  const auto j = static_cast<std::size_t>(it - times_.begin()) - 1;
  return std::min(j, segments_.size() - 1);
}

OpVector PropagatorGrid::advance_within(const OpVector& v, std::size_t j, double from,
                                        double to) const {
  if (to <= from) return v;
  const Segment& seg = segments_[j];
  if (from == seg.t0 && to == seg.t1) return seg.propagator * v;
  if (seg.generator) return expm<SuperOp>(*seg.generator * (to - from)) * v;
  return integrate_propagator(spec_, from, to, nullptr) * v;
}

OpVector PropagatorGrid::propagate(const OpVector& v, double t_from, double t_to) const {
  if (t_to < t_from) throw ConfigError("propagate requires t_from <= t_to");
  if (t_from < times_.front() || t_to > times_.back())
    throw ConfigError("propagation times must lie inside the counting window");
  const std::size_t j0 = locate(t_from);
  const std::size_t j1 = locate(t_to);
  if (j0 == j1) return advance_within(v, j0, t_from, t_to);
  OpVector out = advance_within(v, j0, t_from, segments_[j0].t1);
  for (std::size_t j = j0 + 1; j < j1; ++j) out = segments_[j].propagator * out;
  return advance_within(out, j1, segments_[j1].t0, t_to);
}

OpVector PropagatorGrid::state_vector_at(double t) const {
  const std::size_t j = locate(t);
  return propagate(states_[j].vec(), times_[j], t);
}

}  // namespace photonstat

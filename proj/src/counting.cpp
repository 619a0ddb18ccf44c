#include "photonstat/counting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "photonstat/detail/rk4.hpp"
#include "photonstat/errors.hpp"
#include "photonstat/expm.hpp"
#include "photonstat/liouville.hpp"

namespace photonstat {

namespace {

using HierarchyState = Eigen::VectorXcd;

double max_abs_diff(const HierarchyState& a, const HierarchyState& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Integrates the block system x_m' = (L(t) + offset) x_m + jump x_{m-1},
// m = 0..levels-1, over the whole grid. Constant segments use the exact
// block-Toeplitz exponential; time-dependent segments replay the grid's
// accepted RK4 steps, each split in two when `refine` is set.
std::vector<OpVector> run_hierarchy(const PropagatorGrid& grid, const SuperOp& offset,
                                    const SuperOp& jump, std::size_t levels, bool refine) {
  std::vector<OpVector> x(levels, OpVector::Zero());
  x[0] = grid.state(0).vec();

  const auto& spec = grid.spec();
  const auto rhs = [&](double t, const HierarchyState& y) -> HierarchyState {
    const SuperOp l = build_liouvillian(spec, t) + offset;
    HierarchyState dy(y.size());
    for (std::size_t m = 0; m < levels; ++m) {
      auto block = dy.segment<4>(4 * m);
      block.noalias() = l * y.segment<4>(4 * m);
      if (m > 0) block.noalias() += jump * y.segment<4>(4 * (m - 1));
    }
    return dy;
  };

  const auto& segments = grid.segments();
  for (std::size_t j = 0; j < segments.size();) {
    const Segment& seg = segments[j];
    if (seg.generator) {
      // A run of segments with one generator is advanced by a single
      // exponential over the run's total duration.
      const double h = seg.t1 - seg.t0;
      std::size_t end = j + 1;
      while (end < segments.size() && segments[end].generator &&
             *segments[end].generator == *seg.generator &&
             std::abs((segments[end].t1 - segments[end].t0) - h) <= kSameStep * h)
        ++end;
      const double span = segments[end - 1].t1 - seg.t0;
      x = hierarchy_exponential(*seg.generator + offset, jump, span, levels).apply(x);
      j = end;
      continue;
    }
    HierarchyState y(4 * levels);
    for (std::size_t m = 0; m < levels; ++m) y.segment<4>(4 * m) = x[m];
    for (std::size_t i = 0; i + 1 < seg.substeps.size(); ++i) {
      const double a = seg.substeps[i];
      const double b = seg.substeps[i + 1];
      if (refine) {
        const double mid = a + 0.5 * (b - a);
        y = detail::rk4_richardson(rhs, a, mid - a, y, max_abs_diff, nullptr);
        y = detail::rk4_richardson(rhs, mid, b - mid, y, max_abs_diff, nullptr);
      } else {
        y = detail::rk4_richardson(rhs, a, b - a, y, max_abs_diff, nullptr);
      }
    }
    for (std::size_t m = 0; m < levels; ++m) x[m] = y.segment<4>(4 * m);
    ++j;
  }
  return x;
}

bool has_time_dependent_segments(const PropagatorGrid& grid) {
  return std::any_of(grid.segments().begin(), grid.segments().end(),
                     [](const Segment& s) { return !s.generator.has_value(); });
}

std::vector<double> traces(const std::vector<OpVector>& x, std::size_t from) {
  std::vector<double> out;
  for (std::size_t m = from; m < x.size(); ++m) out.push_back(trace(x[m]).real());
  return out;
}

}  // namespace

const char* to_string(StatsMethod method) {
  return method == StatsMethod::moment_inversion ? "moment-inversion" : "jump-counting";
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c);
}

std::vector<double> binomial_moments(const PropagatorGrid& grid, const SuperOp& jump, std::size_t k) {
  if (k < 1) throw ConfigError("binomial_moments requires k >= 1");
  // L is trace preserving, so d/dt tr(mu_m) = tr(n mu_{m-1}) and the window
  // integral of the correlator kernel equals tr(mu_m(t_end)).
  const SuperOp zero = SuperOp::Zero();
  std::vector<double> moments = traces(run_hierarchy(grid, zero, jump, k + 1, false), 1);
  if (has_time_dependent_segments(grid)) {
    const std::vector<double> fine = traces(run_hierarchy(grid, zero, jump, k + 1, true), 1);
    for (std::size_t m = 0; m < k; ++m) {
      if (std::abs(fine[m] - moments[m]) > kHierarchyConvergence) {
        std::ostringstream os;
        os << "moment hierarchy did not converge under step halving (N_" << m + 1 << " changed by "
           << std::abs(fine[m] - moments[m]) << ")";
        throw NumericalError(os.str());
      }
    }
    moments = fine;
  }
  return moments;
}

double correlator(const PropagatorGrid& grid, const SuperOp& jump, std::span<const double> times) {
  if (times.empty()) throw ConfigError("correlator needs at least one time");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (times[i] < times[i - 1]) throw ConfigError("correlator times must be non-decreasing");
  OpVector v = jump * grid.state_vector_at(times[0]);
  for (std::size_t i = 1; i < times.size(); ++i) {
    v = jump * grid.propagate(v, times[i - 1], times[i]);
  }
  return trace(v).real();
}

std::vector<double> invert_moments(std::span<const double> moments) {
  const std::size_t k = moments.size();
  auto moment = [&](std::size_t m) { return m == 0 ? 1.0 : moments[m - 1]; };
  std::vector<double> p(k + 1, 0.0);
  for (std::size_t n = 0; n <= k; ++n) {
    double sum = 0.0;
    for (std::size_t m = n; m <= k; ++m) {
      const double sign = ((m - n) % 2 == 0) ? 1.0 : -1.0;
      sum += sign * binomial(m, n) * moment(m);
    }
    if (sum < -kClampTolerance) {
      std::ostringstream os;
      os << "moment inversion gave P_" << n << " = " << sum
         << " (cutoff inadequate or moments inaccurate)";
      throw NumericalError(os.str());
    }
    p[n] = std::max(sum, 0.0);
  }
  return p;
}

std::vector<double> moments_from_probabilities(std::span<const double> probabilities,
                                               std::size_t max_m) {
  std::vector<double> out(max_m, 0.0);
  for (std::size_t m = 1; m <= max_m; ++m)
    for (std::size_t n = m; n < probabilities.size(); ++n)
      out[m - 1] += binomial(n, m) * probabilities[n];
  return out;
}

std::vector<double> counting_distribution(const PropagatorGrid& grid, const SuperOp& jump,
                                          std::size_t n_max) {
  if (n_max < 1) throw ConfigError("counting_distribution requires n_max >= 1");
  const SuperOp offset = -jump;
  std::vector<double> p = traces(run_hierarchy(grid, offset, jump, n_max + 1, false), 0);
  if (has_time_dependent_segments(grid)) {
    const std::vector<double> fine = traces(run_hierarchy(grid, offset, jump, n_max + 1, true), 0);
    for (std::size_t n = 0; n <= n_max; ++n) {
      if (std::abs(fine[n] - p[n]) > kHierarchyConvergence)
        throw NumericalError("counting hierarchy did not converge under step halving");
    }
    p = fine;
  }
  double total = 0.0;
  for (double& v : p) {
    if (v < -kClampTolerance) throw NumericalError("counting hierarchy produced a negative probability");
    v = std::max(v, 0.0);
    total += v;
  }
  if (total < 1.0 - kNormalizationTolerance) {
    std::ostringstream os;
    os << "insufficient n_max = " << n_max << ": captured probability " << total;
    throw NumericalError(os.str());
  }
  return p;
}

PhotonStats moment_stats(const PropagatorGrid& grid, const SuperOp& jump, const CutoffPolicy& policy) {
  std::size_t k = std::max<std::size_t>(1, policy.initial_k);
  while (true) {
    // One extra level bounds the truncation error (Bonferroni inequalities).
    std::vector<double> moments = binomial_moments(grid, jump, k + 1);
    const double next = std::max(moments[k], 0.0);
    const double bound = binomial(k + 1, (k + 1) / 2) * next;
    if (bound < policy.tail_tolerance || k >= policy.max_k) {
      if (bound >= policy.tail_tolerance) {
        std::ostringstream os;
        os << "moment cutoff k = " << k << " insufficient: truncation bound " << bound;
        throw NumericalError(os.str());
      }
      moments.pop_back();
      PhotonStats stats;
      stats.probabilities = invert_moments(moments);
      stats.moments = std::move(moments);
      stats.cutoff_k = k;
      stats.tail_bound = bound;
      stats.method = StatsMethod::moment_inversion;
      return stats;
    }
    k = std::min(2 * k, policy.max_k);
  }
}

PhotonStats counting_stats(const PropagatorGrid& grid, const SuperOp& jump, std::size_t k) {
  PhotonStats stats;
  stats.probabilities = counting_distribution(grid, jump, k);
  stats.moments = moments_from_probabilities(stats.probabilities, k);
  double total = 0.0;
  for (double p : stats.probabilities) total += p;
  stats.cutoff_k = k;
  stats.tail_bound = std::max(0.0, 1.0 - total);
  stats.method = StatsMethod::jump_counting;
  return stats;
}

}  // namespace photonstat

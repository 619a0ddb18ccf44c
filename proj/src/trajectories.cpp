#include "photonstat/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "photonstat/detail/rk4.hpp"
#include "photonstat/errors.hpp"
#include "photonstat/liouville.hpp"
#include "photonstat/propagator.hpp"

namespace photonstat {

namespace {

using Ket = Eigen::Vector2cd;

constexpr double kMaxStep = 0.005;
constexpr double kRateStep = 0.1;
constexpr double kMinStep = 1e-9;
constexpr int kBisections = 40;

// exp(A) for 2x2 A = mu I + B with tr B = 0: B^2 = q^2 I, so
// exp(A) = e^mu (cosh q I + sinh(q)/q B).
Operator2 expm2(const Operator2& a) {
  const Complex mu = 0.5 * a.trace();
  const Operator2 b = a - mu * Operator2::Identity();
  const Complex q2 = b(0, 0) * b(0, 0) + b(0, 1) * b(1, 0);
  const Complex q = std::sqrt(q2);
  Complex sinhc;
  if (std::abs(q) < 1e-4) {
    sinhc = 1.0 + q2 / 6.0 + q2 * q2 / 120.0;
  } else {
    sinhc = std::sinh(q) / q;
  }
  return std::exp(mu) * (std::cosh(q) * Operator2::Identity() + sinhc * b);
}

struct Interval {
  double a = 0.0;
  double b = 0.0;
  std::size_t steps = 1;
  double step = 0.0;
  bool constant = false;
  bool undriven = false;
  Operator2 generator;  // -i H_eff when constant
  Operator2 full_step;  // exp(generator * step)
};

struct Plan {
  const DriveSpec* spec = nullptr;
  double decay = 1.0;
  std::vector<Interval> intervals;
  std::vector<DecayChannel> channels;
  std::size_t monitored = 0;
  double undriven_from = 0.0;  // no drive on [undriven_from, t_end]
};

Operator2 effective_generator(const DriveSpec& spec, double n_in) {
  const Complex i{0.0, 1.0};
  const Operator2 h_eff = drive_hamiltonian(spec.topology, n_in) -
                          0.5 * i * spec.total_decay() * ops::excited_projector();
  return -i * h_eff;
}

Plan make_plan(const DriveSpec& spec) {
  Plan plan;
  plan.spec = &spec;
  plan.decay = spec.total_decay();
  plan.channels = decay_channels(spec.topology);
  for (std::size_t c = 0; c < plan.channels.size(); ++c)
    if (plan.channels[c].monitored) plan.monitored = c;

  const double peak_amp = std::sqrt(spec.two_line() ? std::get<TwoLine>(spec.topology).ratio * spec.peak_rate()
                                                    : 0.5 * spec.peak_rate());
  const double max_rate = std::max({plan.decay, 2.0 * peak_amp, std::abs(spec.detuning())});
  const double h = std::min(kMaxStep, kRateStep / max_rate);
  if (!(h >= kMinStep)) {
    std::ostringstream os;
    os << "trajectory step-size underflow: rates up to " << max_rate
       << " require a step below " << kMinStep;
    throw NumericalError(os.str());
  }

  const std::vector<double> bp = spec.breakpoints();
  plan.undriven_from = spec.t_end;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    Interval iv;
    iv.a = bp[i];
    iv.b = bp[i + 1];
    const double len = iv.b - iv.a;
    iv.steps = static_cast<std::size_t>(std::max(1.0, std::ceil(len / h - 1e-9)));
    iv.step = len / static_cast<double>(iv.steps);
    iv.constant = constant_on(spec, iv.a, iv.b);
    if (iv.constant) {
      const double rate = spec.rate(0.5 * (iv.a + iv.b));
      iv.undriven = rate == 0.0;
      iv.generator = effective_generator(spec, rate);
      iv.full_step = expm2(iv.generator * iv.step);
    }
    plan.intervals.push_back(iv);
  }
  for (auto it = plan.intervals.rbegin(); it != plan.intervals.rend() && it->undriven; ++it)
    plan.undriven_from = it->a;
  return plan;
}

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}
  // Open interval (0, 1).
  double operator()() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

// psi(t0 + tau) from psi(t0) inside one interval.
Ket evolve(const Plan& plan, const Interval& iv, const Ket& psi, double t0, double tau) {
  if (tau <= 0.0) return psi;
  if (iv.constant) return expm2(iv.generator * tau) * psi;
  const DriveSpec& spec = *plan.spec;
  const auto rhs = [&spec](double t, const Ket& y) -> Ket {
    return effective_generator(spec, spec.rate(t)) * y;
  };
  return detail::rk4_step(rhs, t0, tau, psi);
}

struct Tally {
  std::vector<std::uint64_t> histogram;
  std::vector<std::uint64_t> channel_jumps;
};

void run_trajectory(const Plan& plan, std::uint64_t seed, Tally& tally) {
  Uniform uniform(seed);
  Ket psi = Ket::Zero();
  psi(plan.spec->initial == InitialState::excited ? 1 : 0) = 1.0;
  double threshold = uniform();
  std::size_t monitored = 0;
  double total_weight = 0.0;
  for (const auto& c : plan.channels) total_weight += c.weight;

  auto jump = [&]() {
    double u = uniform() * total_weight;
    std::size_t c = 0;
    while (c + 1 < plan.channels.size() && u >= plan.channels[c].weight) {
      u -= plan.channels[c].weight;
      ++c;
    }
    ++tally.channel_jumps[c];
    if (c == plan.monitored) ++monitored;
    psi = Ket::Zero();
    psi(0) = 1.0;
    threshold = uniform();
  };

  // Undriven tail: H_eff is diagonal, the squared norm decays to |c_g|^2.
  auto tail_is_silent = [&](double t) {
    const double pg = std::norm(psi(0));
    const double pe = std::norm(psi(1));
    return pg + pe * std::exp(-plan.decay * (plan.spec->t_end - t)) > threshold;
  };

  auto simulate = [&]() {
    for (const Interval& iv : plan.intervals) {
      if (iv.a >= plan.undriven_from && tail_is_silent(iv.a)) return;
      for (std::size_t s = 0; s < iv.steps; ++s) {
        double t = iv.a + iv.step * static_cast<double>(s);
        const double t_next = (s + 1 == iv.steps) ? iv.b : iv.a + iv.step * static_cast<double>(s + 1);
        bool full = true;
        while (t < t_next) {
          const Ket next = (full && iv.constant) ? Ket(iv.full_step * psi)
                                                 : evolve(plan, iv, psi, t, t_next - t);
          if (next.squaredNorm() > threshold) {
            psi = next;
            break;
          }
          double lo = 0.0;
          double hi = t_next - t;
          for (int it = 0; it < kBisections; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (evolve(plan, iv, psi, t, mid).squaredNorm() > threshold)
              lo = mid;
            else
              hi = mid;
          }
          t += hi;
          full = false;
          jump();
          if (t >= plan.undriven_from && tail_is_silent(t)) return;
        }
      }
    }
  };
  simulate();
  if (tally.histogram.size() <= monitored) tally.histogram.resize(monitored + 1, 0);
  ++tally.histogram[monitored];
}

}  // namespace

std::uint64_t trajectory_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double TrajectoryResult::p_hat(std::size_t n) const {
  if (n_traj == 0 || n >= counts.size()) return 0.0;
  return static_cast<double>(counts[n]) / static_cast<double>(n_traj);
}

double TrajectoryResult::stderr_of(std::size_t n) const {
  if (n_traj == 0) return 0.0;
  const double p = p_hat(n);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n_traj));
}

double TrajectoryResult::mean_count() const {
  double sum = 0.0;
  for (std::size_t n = 0; n < counts.size(); ++n) sum += static_cast<double>(n) * static_cast<double>(counts[n]);
  return n_traj ? sum / static_cast<double>(n_traj) : 0.0;
}

TrajectoryResult sample_trajectories(const DriveSpec& spec, std::uint64_t n_traj, std::uint64_t seed,
                                     unsigned threads) {
  if (n_traj < 1) throw ConfigError("n_traj must be at least 1");
  spec.validate();
  const Plan plan = make_plan(spec);

  const std::uint64_t workers = std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, n_traj));
  std::vector<Tally> tallies(workers);
  for (auto& t : tallies) t.channel_jumps.assign(plan.channels.size(), 0);
  auto work = [&](std::uint64_t w) {
    const std::uint64_t begin = n_traj * w / workers;
    const std::uint64_t end = n_traj * (w + 1) / workers;
    for (std::uint64_t i = begin; i < end; ++i) run_trajectory(plan, trajectory_seed(seed, i), tallies[w]);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  TrajectoryResult result;
  result.n_traj = n_traj;
  result.seed = seed;
  std::vector<std::uint64_t> channel_jumps(plan.channels.size(), 0);
  for (const auto& t : tallies) {
    if (result.counts.size() < t.histogram.size()) result.counts.resize(t.histogram.size(), 0);
    for (std::size_t n = 0; n < t.histogram.size(); ++n) result.counts[n] += t.histogram[n];
    for (std::size_t c = 0; c < channel_jumps.size(); ++c) channel_jumps[c] += t.channel_jumps[c];
  }
  for (std::size_t c = 0; c < plan.channels.size(); ++c) {
    result.channel_names.push_back(plan.channels[c].name);
    result.per_channel_totals.push_back(static_cast<double>(channel_jumps[c]) / static_cast<double>(n_traj));
  }
  return result;
}

}  // namespace photonstat

#pragma once

// Helpers shared by the test programs: random states and specs, plus small
// reference integrators that do not go through the library's propagators.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "photonstat/drive.hpp"
#include "photonstat/operators.hpp"

namespace testsupport {

using photonstat::Complex;
using photonstat::Operator2;

inline Operator2 random_matrix(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Operator2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

/// Random full-rank density matrix A A^dagger / tr.
inline photonstat::DensityMatrix random_state(std::mt19937_64& rng) {
  const Operator2 a = random_matrix(rng);
  Operator2 rho = a * a.adjoint();
  rho /= rho.trace();
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return photonstat::DensityMatrix(rho);
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

/// Random square-pulse spec drawn from the ranges used in the consistency suites:
/// T in [0.05, 5] (log-uniform), N in [0, 100], a in {0.01, 0.1, 0.5, 1} or a single line.
inline photonstat::DriveSpec random_square_spec(std::mt19937_64& rng, bool allow_detuning = true) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double width = 0.05 * std::pow(100.0, u(rng));
  const double photons = 100.0 * u(rng);
  const double detuning = allow_detuning && u(rng) < 0.3 ? 4.0 * (u(rng) - 0.5) : 0.0;
  static constexpr double ratios[] = {0.01, 0.1, 0.5, 1.0};
  const int pick = static_cast<int>(u(rng) * 5.0);
  photonstat::Topology topology = photonstat::SingleLine{detuning};
  if (pick < 4) topology = photonstat::TwoLine{ratios[pick], detuning};
  return photonstat::DriveSpec::make(photonstat::SquarePulse{width, photons}, topology);
}

/// Gaussian sampled on [0, 4 sigma] and carrying about `photons` in total. The
/// envelope stays positive on its support so sqrt(N_in) remains smooth there.
inline photonstat::SampledPulse gaussian_pulse(double sigma, double photons, std::size_t samples = 81) {
  photonstat::SampledPulse p;
  const double t_max = 4.0 * sigma;
  const double norm = photons / (sigma * std::sqrt(2.0 * M_PI));
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = t_max * static_cast<double>(i) / static_cast<double>(samples - 1);
    const double x = (t - 2.0 * sigma) / sigma;
    p.times.push_back(t);
    p.rates.push_back(norm * std::exp(-0.5 * x * x));
  }
  return p;
}

/// Master-equation right-hand side written directly with 2x2 matrix algebra.
inline Operator2 lindblad_rhs(const photonstat::DriveSpec& spec, double t, const Operator2& rho) {
  const Complex i(0.0, 1.0);
  Operator2 sm = Operator2::Zero();
  sm(0, 1) = 1.0;
  Operator2 sx = Operator2::Zero();
  sx(0, 1) = sx(1, 0) = 1.0;
  Operator2 sz = Operator2::Zero();
  sz(0, 0) = -1.0;
  sz(1, 1) = 1.0;
  const double n_in = spec.rate(t);
  double gamma = 1.0;
  double omega = std::sqrt(n_in / 2.0);
  double delta = 0.0;
  if (const auto* two = std::get_if<photonstat::TwoLine>(&spec.topology)) {
    gamma = 1.0 + two->ratio;
    omega = std::sqrt(two->ratio * n_in);
    delta = two->detuning;
  } else {
    delta = std::get<photonstat::SingleLine>(spec.topology).detuning;
  }
  const Operator2 sp = sm.adjoint();
  Operator2 out = i * (delta / 2.0) * (sz * rho - rho * sz) - i * omega * (sx * rho - rho * sx);
  out += gamma * (sm * rho * sp - 0.5 * (sp * sm * rho + rho * sp * sm));
  return out;
}

/// Fixed-step classical RK4 on the 2x2 master equation, restarted at every
/// envelope breakpoint. Stage times are kept inside [a, b) of each piece so a
/// square pulse is seen at its left limit on the trailing edge.
inline Operator2 reference_evolve(const photonstat::DriveSpec& spec, Operator2 rho, double t0, double t1,
                                  std::size_t steps) {
  std::vector<double> cuts{t0};
  for (double b : spec.breakpoints())
    if (b > t0 && b < t1) cuts.push_back(b);
  cuts.push_back(t1);
  const double total = t1 - t0;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p];
    const double b = cuts[p + 1];
    const std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(steps * (b - a) / total)));
    const double h = (b - a) / static_cast<double>(n);
    const double last = std::nextafter(b, a);
    auto f = [&](double t, const Operator2& r) { return lindblad_rhs(spec, std::min(t, last), r); };
    for (std::size_t s = 0; s < n; ++s) {
      const double t = a + h * static_cast<double>(s);
      const Operator2 k1 = f(t, rho);
      const Operator2 k2 = f(t + h / 2, rho + (h / 2) * k1);
      const Operator2 k3 = f(t + h / 2, rho + (h / 2) * k2);
      const Operator2 k4 = f(t + h, rho + h * k3);
      rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  return rho;
}

/// Gauss-Legendre nodes and weights on [-1, 1], eight points.
inline const std::vector<std::pair<double, double>>& gauss_legendre8() {
  static const std::vector<std::pair<double, double>> rule{
      {-0.9602898564975363, 0.1012285362903763}, {-0.7966664774136267, 0.2223810344533745},
      {-0.5255324099163290, 0.3137066458778873}, {-0.1834346424956498, 0.3626837833783620},
      {0.1834346424956498, 0.3626837833783620},  {0.5255324099163290, 0.3137066458778873},
      {0.7966664774136267, 0.2223810344533745},  {0.9602898564975363, 0.1012285362903763}};
  return rule;
}

/// SplitMix64 written out independently of the library, for seed checks.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace testsupport

#pragma once

#include <cmath>

namespace photonstat::detail {

/// Classical RK4 step of y' = f(t, y).
template <typename State, typename Rhs>
State rk4_step(const Rhs& f, double t, double h, const State& y) {
  const State k1 = f(t, y);
  const State k2 = f(t + 0.5 * h, y + (0.5 * h) * k1);
  const State k3 = f(t + 0.5 * h, y + (0.5 * h) * k2);
  const State k4 = f(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// One full step and two half steps; returns the Richardson-extrapolated
/// value and writes the max-abs difference between the two estimates.
template <typename State, typename Rhs, typename Diff>
State rk4_richardson(const Rhs& f, double t, double h, const State& y, const Diff& max_abs_diff,
                     double* error) {
  const State full = rk4_step(f, t, h, y);
  const State mid = rk4_step(f, t, 0.5 * h, y);
  const State half = rk4_step(f, t + 0.5 * h, 0.5 * h, mid);
  if (error) *error = max_abs_diff(half, full);
  return half + (1.0 / 15.0) * (half - full);
}

}  // namespace photonstat::detail

#pragma once

#include <cmath>
#include <cstddef>

namespace thermoq::detail {

// Classic fixed-step fourth-order Runge-Kutta step for y' = f(t, y).
// State must support addition and multiplication by a double.
template <class State, class Rhs>
State rk4_step(const Rhs& rhs, double t, const State& y, double h) {
  const State k1 = rhs(t, y);
  const State k2 = rhs(t + 0.5 * h, State(y + (0.5 * h) * k1));
  const State k3 = rhs(t + 0.5 * h, State(y + (0.5 * h) * k2));
  const State k4 = rhs(t + h, State(y + h * k3));
  return State(y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

// Number of equal substeps of size <= max_step covering an interval.
inline std::size_t substeps(double interval, double max_step) {
  if (interval <= 0.0) return 0;
  const double n = std::ceil(interval / max_step * (1.0 - 1e-14));
  return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

}  // namespace thermoq::detail

#pragma once

// Quantum Fisher information for the inverse temperature carried by a probe
// that stays diagonal in its energy basis, and the closed-form quantities that
// decide when a Markovian transient beats the thermal state.
//
// With q1(t) = p^e + e^{lambda t} (p - p^e):
//   d_beta q1      = -2 omega p^e (1 - p^e) * derivative_factor
//   q1 (1 - q1)    =  p^e (1 - p^e) * variance_factor
//   F(t) / F_therm =  derivative_factor^2 / variance_factor

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>

#include "thermoq/core_physics.hpp"

namespace thermoq {

/// cold: p < p^e (initial temperature below the bath), hot: p > p^e.
enum class ProbeClass { cold, hot, thermal };

std::string_view to_string(ProbeClass c) noexcept;

/// |p - p^e| at or below this counts as thermal.
inline constexpr double kThermalTolerance = 1e-14;

ProbeClass classify(const ProbeSpec& probe, const BathSpec& bath);

struct TheoremQuantities {
  double derivative_factor;   // 1 - e^{lt} + 2t (p^e - p)(l^2/gamma) e^{lt}
  double variance_factor;     // 1 - a e^{2lt} + b e^{lt}
  double variance_quadratic;  // a = (p^e - p)^2 / (p^e (1 - p^e))
  double variance_linear;     // b = (p^e - p)(2p^e - 1) / (p^e (1 - p^e))
  double stationary_rate;     // 2 (p^e - p) l^2 / gamma (n if cold, m if hot)
  double ratio;               // derivative_factor^2 / variance_factor
  ProbeClass classification;
};

TheoremQuantities theorem_quantities(const ProbeSpec& probe,
                                     const BathSpec& bath, double t);

double derivative_factor(const ProbeSpec& probe, const BathSpec& bath, double t);
double variance_factor(const ProbeSpec& probe, const BathSpec& bath, double t);
/// F(beta, t) / F(beta); 0 wherever derivative_factor vanishes.
double qfi_ratio(const ProbeSpec& probe, const BathSpec& bath, double t);

/// (r - 1) e^{-lambda t}. Same sign as r - 1, but stays representable when
/// e^{lambda t} is far below machine epsilon and r itself rounds to 1.
double scaled_ratio_excess(const ProbeSpec& probe, const BathSpec& bath, double t);

/// (dq1/dbeta)^2 / (q1 (1 - q1)). Exactly 0 when the derivative is 0; a
/// non-zero derivative on a pure state raises ErrorKind::degenerate_state.
double qfi_diagonal(double q1, double dq1_dbeta);

/// 4 omega^2 p^e (1 - p^e).
double thermal_qfi(double omega, double beta);

/// Maximiser of derivative_factor for cold probes:
/// (lambda - n) / (n lambda). None for hot and thermal probes, whose only
/// stationary point lies at t <= 0.
std::optional<double> critical_time(const ProbeSpec& probe, const BathSpec& bath);

double analytic_dq_dbeta(const ProbeSpec& probe, const BathSpec& bath, double t);

/// max(1e-6, 1e-5 beta).
double default_fd_step(double beta);

/// Central difference (f(beta + h) - f(beta - h)) / 2h.
double finite_difference_dq_dbeta(const std::function<double(double)>& q1_of_beta,
                                  double beta, double h);

/// Central difference of the closed-form Markovian population in beta, all
/// rates re-derived at beta +- h.
double markov_fd_dq_dbeta(const ProbeSpec& probe, const BathSpec& bath, double t,
                          double h);

struct RatioSearchOptions {
  std::size_t grid_points = 2000;
  double horizon = 30.0;      // in units of 1/|lambda|
  double tolerance = 1e-10;   // golden-section bracket, in units of 1/|lambda|
};

struct RatioMaximum {
  double r_max;
  double t_at_max;
};

/// Dense uniform grid over [0, horizon/|lambda|] followed by golden-section
/// refinement around the best grid point. For cold probes the critical time
/// is also a candidate, so r_max >= r(t_c) always holds.
RatioMaximum maximize_ratio(const ProbeSpec& probe, const BathSpec& bath,
                            const RatioSearchOptions& options = {});

}  // namespace thermoq

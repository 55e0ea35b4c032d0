#include "thermoq/core_physics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "detail/describe.hpp"
#include "thermoq/error.hpp"

namespace thermoq {
using detail::describe;

ProbeSpec::ProbeSpec(double omega, double p) : omega_(omega), p_(p) {
  if (!std::isfinite(omega) || omega <= 0.0) {
    fail(ErrorKind::parameter,
         "probe omega must be finite and > 0 (got " + describe(omega) + ")");
  }
  if (!std::isfinite(p) || p < 0.0 || p > 0.5) {
    fail(ErrorKind::parameter,
         "probe population p must satisfy p ∈ [0, 1/2] (got " + describe(p) +
             ")");
  }
}

double ProbeSpec::initial_beta() const noexcept {
  if (p_ == 0.0) return std::numeric_limits<double>::infinity();
  return std::log((1.0 - p_) / p_) / (2.0 * omega_);
}

BathSpec::BathSpec(double beta, double kappa) : beta_(beta), kappa_(kappa) {
  if (!std::isfinite(beta) || beta <= 0.0) {
    fail(ErrorKind::parameter,
         "bath beta must satisfy beta ∈ (0, ∞) (got " + describe(beta) + ")");
  }
  if (!std::isfinite(kappa) || kappa <= 0.0) {
    fail(ErrorKind::parameter,
         "bath kappa must be finite and > 0 (got " + describe(kappa) + ")");
  }
}

DiagonalQubitState::DiagonalQubitState(double q0, double q1) {
  const auto in_range = [](double q) {
    return std::isfinite(q) && q >= -kTolerance && q <= 1.0 + kTolerance;
  };
  if (!in_range(q0) || !in_range(q1)) {
    fail(ErrorKind::parameter, "populations must lie in [0, 1] (got q0=" +
                                   describe(q0) + ", q1=" + describe(q1) + ")");
  }
  if (std::abs(q0 + q1 - 1.0) > kTolerance) {
    fail(ErrorKind::parameter, "populations must sum to 1 (got q0+q1=" +
                                   describe(q0 + q1) + ")");
  }
  q0_ = std::clamp(q0, 0.0, 1.0);
  q1_ = std::clamp(q1, 0.0, 1.0);
}

double thermal_excited_population(double omega, double beta) {
  if (!std::isfinite(omega) || omega <= 0.0) {
    fail(ErrorKind::parameter,
         "omega must be finite and > 0 (got " + describe(omega) + ")");
  }
  if (!std::isfinite(beta) || beta < 0.0) {
    fail(ErrorKind::parameter,
         "beta must be finite and >= 0 (got " + describe(beta) + ")");
  }
  // Divide through by e^{w b}: e^{-2wb} / (1 + e^{-2wb}).
  const double boltzmann = std::exp(-2.0 * omega * beta);
  return boltzmann / (1.0 + boltzmann);
}

double bose_einstein(double omega01, double beta) {
  if (!std::isfinite(omega01) || omega01 <= 0.0) {
    fail(ErrorKind::parameter,
         "omega01 must be finite and > 0 (got " + describe(omega01) + ")");
  }
  if (beta == 0.0) {
    fail(ErrorKind::divergence,
         "Bose-Einstein occupation diverges at beta = 0");
  }
  if (!std::isfinite(beta) || beta < 0.0) {
    fail(ErrorKind::parameter,
         "beta must be finite and > 0 (got " + describe(beta) + ")");
  }
  const double x = omega01 * beta;
  return std::exp(-x) / -std::expm1(-x);
}

double equilibrium_population(const ProbeSpec& probe, const BathSpec& bath) {
  return thermal_excited_population(probe.omega(), bath.beta());
}

RateSet rates(const ProbeSpec& probe, const BathSpec& bath) {
  const double omega01 = probe.bohr_frequency();
  RateSet r{};
  r.eta = bose_einstein(omega01, bath.beta());
  r.gamma = bath.kappa() * omega01;
  r.gamma_down = r.gamma * (1.0 + r.eta);
  r.gamma_up = r.gamma * r.eta;
  r.lambda = -(r.gamma_up + r.gamma_down);
  r.gamma_T = 0.5 * (r.gamma_down + r.gamma_up);
  return r;
}

std::string_view to_string(CouplingStatus status) noexcept {
  return status == CouplingStatus::pass ? "pass" : "warn";
}

WeakCouplingReport validate_weak_coupling(const ProbeSpec& probe,
                                          const BathSpec& bath) {
  const RateSet r = rates(probe, bath);
  const double figure = (r.gamma_up + r.gamma_down) / probe.bohr_frequency();
  return {figure >= WeakCouplingReport::kThreshold ? CouplingStatus::warn
                                                   : CouplingStatus::pass,
          figure};
}

}  // namespace thermoq

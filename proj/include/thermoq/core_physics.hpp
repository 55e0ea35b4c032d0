#pragma once

// Parameter records and the rate/population formulas shared by every solver.
// Units are natural (hbar = k_B = 1). The probe Hamiltonian is omega*sigma_z,
// so its Bohr frequency is 2*omega.

#include <string_view>

namespace thermoq {

/// Qubit probe prepared as diag(1 - p, p) in the energy basis.
class ProbeSpec {
 public:
  /// Throws ErrorKind::parameter unless omega > 0 and 0 <= p <= 1/2.
  ProbeSpec(double omega, double p);

  double omega() const noexcept { return omega_; }
  double p() const noexcept { return p_; }
  double bohr_frequency() const noexcept { return 2.0 * omega_; }

  /// ln((1 - p)/p) / (2 omega); +inf when p == 0, 0 when p == 1/2.
  double initial_beta() const noexcept;

 private:
  double omega_;
  double p_;
};

/// Bosonic bath with Ohmic spectral density kappa * omega.
class BathSpec {
 public:
  /// Throws ErrorKind::parameter unless 0 < beta < inf and kappa > 0.
  BathSpec(double beta, double kappa);

  double beta() const noexcept { return beta_; }
  double kappa() const noexcept { return kappa_; }

 private:
  double beta_;
  double kappa_;
};

struct RateSet {
  double eta;         // Bose-Einstein occupation at the Bohr frequency
  double gamma;       // kappa * omega01
  double gamma_down;  // gamma (1 + eta)
  double gamma_up;    // gamma eta
  double lambda;      // -(gamma_up + gamma_down), always < 0
  double gamma_T;     // (gamma_down + gamma_up) / 2
};

/// Populations of a state diagonal in the energy basis.
class DiagonalQubitState {
 public:
  static constexpr double kTolerance = 1e-12;

  /// Accepts populations within kTolerance of [0, 1] summing to 1 within
  /// kTolerance, clamping them into [0, 1]. Throws ErrorKind::parameter
  /// otherwise.
  DiagonalQubitState(double q0, double q1);

  static DiagonalQubitState from_excited(double q1) {
    return DiagonalQubitState(1.0 - q1, q1);
  }

  double q0() const noexcept { return q0_; }
  double q1() const noexcept { return q1_; }

  friend bool operator==(const DiagonalQubitState&,
                         const DiagonalQubitState&) = default;

 private:
  double q0_;
  double q1_;
};

/// Excited population of the Gibbs state of omega*sigma_z at inverse
/// temperature beta: e^{-w b} / (e^{w b} + e^{-w b}). Requires omega > 0 and
/// finite beta >= 0.
double thermal_excited_population(double omega, double beta);

/// 1 / (e^{omega01 beta} - 1). beta == 0 raises ErrorKind::divergence.
double bose_einstein(double omega01, double beta);

/// Equilibrium excited population of the probe at the bath temperature.
double equilibrium_population(const ProbeSpec& probe, const BathSpec& bath);

RateSet rates(const ProbeSpec& probe, const BathSpec& bath);

enum class CouplingStatus { pass, warn };

std::string_view to_string(CouplingStatus status) noexcept;

struct WeakCouplingReport {
  static constexpr double kThreshold = 0.01;

  CouplingStatus status;
  double figure;  // (gamma_up + gamma_down) / omega01
};

WeakCouplingReport validate_weak_coupling(const ProbeSpec& probe,
                                          const BathSpec& bath);

}  // namespace thermoq

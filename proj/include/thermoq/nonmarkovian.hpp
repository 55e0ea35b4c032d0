#pragma once

// Probe coupled by an excitation-exchange term of strength J to an auxiliary
// qubit; only the auxiliary sees the bath. The composite obeys a GKSL
// equation whose dissipator acts on the auxiliary alone. Two routes to the
// probe state are provided:
//   * exact fixed-step RK4 integration of the 4x4 density matrix;
//   * the damped-oscillator reduction for the population imbalance
//     Delta = rho(01,01) - rho(10,10), valid in the underdamped regime.
//
// Basis ordering is |probe aux>: |00>, |01>, |10>, |11> with |0> the ground
// state, i.e. index = 2 * probe + aux.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "thermoq/core_physics.hpp"

namespace thermoq {

using Matrix4c = Eigen::Matrix<std::complex<double>, 4, 4>;

class NonMarkovParams {
 public:
  /// The auxiliary field equals the probe's. Throws ErrorKind::parameter
  /// unless coupling > 0.
  NonMarkovParams(ProbeSpec probe, BathSpec bath, double coupling);

  const ProbeSpec& probe() const noexcept { return probe_; }
  const BathSpec& bath() const noexcept { return bath_; }
  double coupling() const noexcept { return coupling_; }
  double auxiliary_omega() const noexcept { return probe_.omega(); }
  const RateSet& rates() const noexcept { return rates_; }

  /// 4 J^2 > gamma_T^2 / 4.
  bool underdamped() const noexcept;

  /// Same probe and coupling with the bath at another inverse temperature.
  NonMarkovParams with_beta(double beta) const;

 private:
  ProbeSpec probe_;
  BathSpec bath_;
  double coupling_;
  RateSet rates_;
};

struct CompositeInvariants {
  static constexpr double kHermiticity = 1e-12;
  static constexpr double kTrace = 1e-12;
  static constexpr double kEigenvalue = -1e-10;
  static constexpr double kCoherence = 1e-10;

  double hermiticity_error;  // max |rho - rho^dagger| entry
  double trace_error;        // |tr rho - 1|
  double min_eigenvalue;
  double probe_coherence;    // |<0|Tr_A rho|1>|

  bool physical() const noexcept {
    return hermiticity_error <= kHermiticity && trace_error <= kTrace &&
           min_eigenvalue >= kEigenvalue;
  }
  bool ok() const noexcept { return physical() && probe_coherence <= kCoherence; }
};

class CompositeState {
 public:
  /// Throws ErrorKind::parameter unless the matrix is Hermitian, unit trace
  /// and positive semidefinite within CompositeInvariants tolerances.
  explicit CompositeState(const Matrix4c& rho);

  const Matrix4c& matrix() const noexcept { return rho_; }
  CompositeInvariants invariants() const;

  /// rho(01,01) - rho(10,10).
  double population_imbalance() const noexcept;
  /// rho(00,00) + rho(10,10).
  double auxiliary_ground_population() const noexcept;
  double trace() const noexcept;

 private:
  struct Unchecked {};
  CompositeState(const Matrix4c& rho, Unchecked) : rho_(rho) {}
  friend class CompositeIntegrator;

  Matrix4c rho_;
};

CompositeInvariants measure_invariants(const Matrix4c& rho);

/// rho_i (x) tau_beta: diag((1-p)(1-p^e), (1-p)p^e, p(1-p^e), p p^e).
CompositeState initial_composite(const NonMarkovParams& params);

/// Composite Hamiltonian omega sz(x)1 + omega_A 1(x)sz + J (s+ (x) s- + h.c.).
Matrix4c composite_hamiltonian(const NonMarkovParams& params);

/// -i[H, rho] + auxiliary dissipator with G_down (lowering) and G_up (raising).
Matrix4c gksl_generator(const Matrix4c& rho, const NonMarkovParams& params);

struct StepBounds {
  double oscillation;  // 2 pi / (200 * 2J)
  double relaxation;   // 0.02 / gamma_T
  double limit() const noexcept {
    return oscillation < relaxation ? oscillation : relaxation;
  }
};

StepBounds composite_step_bounds(const NonMarkovParams& params);

/// 2 pi / (400 Omega) when underdamped, otherwise 2 pi / (400 * 2J), capped
/// by the step bounds.
double default_composite_step(const NonMarkovParams& params);

/// 2 / gamma_T.
double default_nonmarkov_horizon(const NonMarkovParams& params);

struct CompositeSample {
  double t;
  CompositeState state;
};

struct CompositeTrajectory {
  std::vector<CompositeSample> samples;
  double max_trace_drift = 0.0;  // over every RK4 step, not only samples
  std::size_t steps = 0;
};

/// Fixed-step RK4 over [0, t_max] with equal steps <= step, recording the
/// initial state, every `record_every`-th step and the final state.
/// Throws ErrorKind::parameter when step exceeds composite_step_bounds.
CompositeTrajectory integrate_composite(const NonMarkovParams& params,
                                        double t_max, double step,
                                        std::size_t record_every = 1);

/// RK4 trajectory recorded exactly at the given sorted, nonnegative times.
CompositeTrajectory integrate_composite_at(const NonMarkovParams& params,
                                           std::span<const double> times,
                                           double step);

/// Damped-oscillator solution
/// Delta(t) = Delta0 e^{-gT t/2} (cos W t + gT/(2W) sin W t).
struct ReducedSolution {
  double delta0;      // p^e - p
  double gamma_T;
  double big_omega;   // sqrt(4 J^2 - gamma_T^2 / 4)

  double envelope(double t) const;
  double phase(double t) const { return big_omega * t; }
  /// Delta(t) / Delta0; 1 when Delta0 = 0.
  double normalized(double t) const;
  double population_imbalance(double t) const { return delta0 * normalized(t); }
};

/// Throws ErrorKind::regime unless underdamped.
ReducedSolution reduced_solution(const NonMarkovParams& params);

double delta_analytic(const NonMarkovParams& params, double t);

/// q1 = p + (p^e - p)(1 - Delta/Delta0) / 2.
DiagonalQubitState reduced_probe_analytic(const NonMarkovParams& params,
                                          double t);

/// Partial trace over the auxiliary. Probe coherences above
/// CompositeInvariants::kCoherence raise ErrorKind::internal_consistency.
DiagonalQubitState reduced_probe_numeric(const CompositeState& state);

enum class NonMarkovMethod { automatic, analytic, rk4 };

std::string_view to_string(NonMarkovMethod method) noexcept;

struct NonMarkovPoint {
  double t;
  double q1;
  double qfi;
};

/// Probe population and QFI on a sorted, nonnegative time grid. d_beta q1 is
/// a central difference in beta with every beta-dependent input re-derived.
/// `automatic` uses the analytic path when underdamped, RK4 otherwise.
/// step <= 0 selects default_composite_step.
std::vector<NonMarkovPoint> nonmarkov_trajectory(const NonMarkovParams& params,
                                                 std::span<const double> times,
                                                 NonMarkovMethod method,
                                                 double step = 0.0);

double qfi_nonmarkov(const NonMarkovParams& params, double t,
                     NonMarkovMethod method = NonMarkovMethod::automatic);

}  // namespace thermoq

#include "thermoq/nonmarkovian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "detail/describe.hpp"
#include "detail/rk4.hpp"
#include "thermoq/error.hpp"
#include "thermoq/qfi.hpp"

namespace thermoq {

using detail::describe;
using Complex = std::complex<double>;
using Vector16c = Eigen::Matrix<Complex, 16, 1>;
using Matrix16c = Eigen::Matrix<Complex, 16, 16>;

namespace {

constexpr int kProbeGroundAuxExcited = 1;  // |01>
constexpr int kProbeExcitedAuxGround = 2;  // |10>

// Auxiliary lowering operator 1 (x) |0><1|.
Matrix4c auxiliary_lowering() {
  Matrix4c op = Matrix4c::Zero();
  op(0, 1) = 1.0;
  op(2, 3) = 1.0;
  return op;
}

void require_time(double t) {
  if (!std::isfinite(t) || t < 0.0) {
    fail(ErrorKind::parameter, "time must be finite and >= 0 (got " + describe(t) + ")");
  }
}

void require_sorted(std::span<const double> times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    require_time(times[i]);
    if (i > 0 && !(times[i] > times[i - 1])) {
      fail(ErrorKind::parameter,
           "time grid must be strictly increasing (index " + std::to_string(i) + ")");
    }
  }
}

}  // namespace

NonMarkovParams::NonMarkovParams(ProbeSpec probe, BathSpec bath, double coupling)
    : probe_(probe), bath_(bath), coupling_(coupling), rates_(thermoq::rates(probe, bath)) {
  if (!std::isfinite(coupling) || coupling <= 0.0) {
    fail(ErrorKind::parameter, "coupling J must be finite and > 0 (got " + describe(coupling) + ")");
  }
}

bool NonMarkovParams::underdamped() const noexcept {
  return 4.0 * coupling_ * coupling_ > rates_.gamma_T * rates_.gamma_T / 4.0;
}

NonMarkovParams NonMarkovParams::with_beta(double beta) const {
  return NonMarkovParams(probe_, BathSpec(beta, bath_.kappa()), coupling_);
}

CompositeInvariants measure_invariants(const Matrix4c& rho) {
  CompositeInvariants inv{};
  inv.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  inv.trace_error = std::abs(rho.trace() - 1.0);
  const Matrix4c hermitian_part = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(hermitian_part, Eigen::EigenvaluesOnly);
  inv.min_eigenvalue = solver.eigenvalues().minCoeff();
  inv.probe_coherence = std::abs(rho(0, 2) + rho(1, 3));
  return inv;
}

CompositeState::CompositeState(const Matrix4c& rho) : rho_(rho) {
  const CompositeInvariants inv = measure_invariants(rho);
  if (!inv.physical()) {
    fail(ErrorKind::parameter,
         "composite state is not a density matrix (hermiticity error " +
             describe(inv.hermiticity_error) + ", trace error " + describe(inv.trace_error) +
             ", min eigenvalue " + describe(inv.min_eigenvalue) + ")");
  }
}

CompositeInvariants CompositeState::invariants() const { return measure_invariants(rho_); }

double CompositeState::population_imbalance() const noexcept {
  return rho_(kProbeGroundAuxExcited, kProbeGroundAuxExcited).real() -
         rho_(kProbeExcitedAuxGround, kProbeExcitedAuxGround).real();
}

double CompositeState::auxiliary_ground_population() const noexcept {
  return rho_(0, 0).real() + rho_(2, 2).real();
}

double CompositeState::trace() const noexcept { return rho_.trace().real(); }

CompositeState initial_composite(const NonMarkovParams& params) {
  const double p = params.probe().p();
  const double pe = equilibrium_population(params.probe(), params.bath());
  Matrix4c rho = Matrix4c::Zero();
  rho(0, 0) = (1.0 - p) * (1.0 - pe);
  rho(1, 1) = (1.0 - p) * pe;
  rho(2, 2) = p * (1.0 - pe);
  rho(3, 3) = p * pe;
  return CompositeState(rho);
}

Matrix4c composite_hamiltonian(const NonMarkovParams& params) {
  const double w = params.probe().omega();
  const double wa = params.auxiliary_omega();
  Matrix4c h = Matrix4c::Zero();
  h(0, 0) = -w - wa;
  h(1, 1) = -w + wa;
  h(2, 2) = w - wa;
  h(3, 3) = w + wa;
  // s+ (x) s- maps |01> to |10>.
  h(kProbeExcitedAuxGround, kProbeGroundAuxExcited) = params.coupling();
  h(kProbeGroundAuxExcited, kProbeExcitedAuxGround) = params.coupling();
  return h;
}

Matrix4c gksl_generator(const Matrix4c& rho, const NonMarkovParams& params) {
  static const Matrix4c lower = auxiliary_lowering();
  static const Matrix4c raise = lower.adjoint();
  static const Matrix4c excited_projector = raise * lower;
  static const Matrix4c ground_projector = lower * raise;
  const Matrix4c h = composite_hamiltonian(params);
  const Complex i{0.0, 1.0};
  const double down = params.rates().gamma_down;
  const double up = params.rates().gamma_up;

  Matrix4c out = -i * (h * rho - rho * h);
  out += down * (lower * rho * raise -
                 0.5 * (excited_projector * rho + rho * excited_projector));
  out += up * (raise * rho * lower -
               0.5 * (ground_projector * rho + rho * ground_projector));
  return out;
}

StepBounds composite_step_bounds(const NonMarkovParams& params) {
  return {2.0 * std::numbers::pi / (200.0 * 2.0 * params.coupling()),
          0.02 / params.rates().gamma_T};
}

double default_composite_step(const NonMarkovParams& params) {
  const double g = params.rates().gamma_T;
  const double j = params.coupling();
  const double frequency =
      params.underdamped() ? std::sqrt(4.0 * j * j - g * g / 4.0) : 2.0 * j;
  const double step = 2.0 * std::numbers::pi / (400.0 * frequency);
  return std::min(step, composite_step_bounds(params).limit());
}

double default_nonmarkov_horizon(const NonMarkovParams& params) {
  return 2.0 / params.rates().gamma_T;
}

// RK4 on vec(rho) with the Liouvillian assembled column by column from
// gksl_generator, so both share one definition of the dynamics.
class CompositeIntegrator {
 public:
  explicit CompositeIntegrator(const NonMarkovParams& params) {
    for (int col = 0; col < 4; ++col) {
      for (int row = 0; row < 4; ++row) {
        Matrix4c unit = Matrix4c::Zero();
        unit(row, col) = 1.0;
        const Matrix4c image = gksl_generator(unit, params);
        liouvillian_.col(row + 4 * col) = Eigen::Map<const Vector16c>(image.data());
      }
    }
  }

  CompositeTrajectory run(const CompositeState& initial, std::span<const double> times,
                          double step, std::size_t record_every) const {
    CompositeTrajectory out;
    Vector16c state = Eigen::Map<const Vector16c>(initial.matrix().data());
    const auto rhs = [this](double, const Vector16c& v) -> Vector16c { return liouvillian_ * v; };

    double t = 0.0;
    std::size_t since_record = 0;
    out.samples.push_back({0.0, initial});
    for (const double target : times) {
      if (target == 0.0) continue;
      const std::size_t n = detail::substeps(target - t, step);
      const double h = (target - t) / static_cast<double>(n);
      for (std::size_t k = 0; k < n; ++k) {
        state = detail::rk4_step(rhs, t, state, h);
        t = (k + 1 == n) ? target : t + h;
        ++out.steps;
        const double trace = (state(0) + state(5) + state(10) + state(15)).real();
        out.max_trace_drift = std::max(out.max_trace_drift, std::abs(trace - 1.0));
        if (record_every > 0 && ++since_record == record_every && k + 1 != n) {
          since_record = 0;
          out.samples.push_back({t, as_state(state)});
        }
      }
      since_record = 0;
      out.samples.push_back({target, as_state(state)});
    }
    return out;
  }

 private:
  static CompositeState as_state(const Vector16c& v) {
    return CompositeState(Eigen::Map<const Matrix4c>(v.data()), CompositeState::Unchecked{});
  }

  Matrix16c liouvillian_;
};

namespace {

void require_step(const NonMarkovParams& params, double step) {
  const StepBounds bounds = composite_step_bounds(params);
  if (!(step > 0.0) || step > bounds.limit() * (1.0 + 1e-12)) {
    fail(ErrorKind::parameter,
         "step must satisfy 0 < step <= min(2π/(200·2J), 0.02/Γ_T) = min(" +
             describe(bounds.oscillation) + ", " + describe(bounds.relaxation) + ") (got " +
             describe(step) + ")");
  }
}

}  // namespace

CompositeTrajectory integrate_composite(const NonMarkovParams& params, double t_max,
                                        double step, std::size_t record_every) {
  require_time(t_max);
  const CompositeIntegrator integrator(params);
  const CompositeState initial = initial_composite(params);
  if (t_max == 0.0) return integrator.run(initial, {}, step, record_every);
  require_step(params, step);
  const double target[] = {t_max};
  return integrator.run(initial, target, step, record_every);
}

CompositeTrajectory integrate_composite_at(const NonMarkovParams& params,
                                           std::span<const double> times, double step) {
  require_sorted(times);
  const bool needs_steps = !times.empty() && times.back() > 0.0;
  if (needs_steps) require_step(params, step);
  const CompositeIntegrator integrator(params);
  CompositeTrajectory out = integrator.run(initial_composite(params), times, step, 0);
  // run() always records t = 0; drop it when the grid does not start there.
  if (times.empty() || times.front() > 0.0) out.samples.erase(out.samples.begin());
  return out;
}

double ReducedSolution::envelope(double t) const { return std::exp(-0.5 * gamma_T * t); }

double ReducedSolution::normalized(double t) const {
  if (delta0 == 0.0) return 1.0;
  return envelope(t) *
         (std::cos(big_omega * t) + gamma_T / (2.0 * big_omega) * std::sin(big_omega * t));
}

ReducedSolution reduced_solution(const NonMarkovParams& params) {
  if (!params.underdamped()) {
    fail(ErrorKind::regime, "not underdamped (4J² <= Γ_T²/4); use rk4");
  }
  const double g = params.rates().gamma_T;
  const double j = params.coupling();
  const double pe = equilibrium_population(params.probe(), params.bath());
  return {pe - params.probe().p(), g, std::sqrt(4.0 * j * j - g * g / 4.0)};
}

double delta_analytic(const NonMarkovParams& params, double t) {
  require_time(t);
  return reduced_solution(params).population_imbalance(t);
}

DiagonalQubitState reduced_probe_analytic(const NonMarkovParams& params, double t) {
  require_time(t);
  const ReducedSolution solution = reduced_solution(params);
  const double p = params.probe().p();
  return DiagonalQubitState::from_excited(p + 0.5 * solution.delta0 *
                                                  (1.0 - solution.normalized(t)));
}

DiagonalQubitState reduced_probe_numeric(const CompositeState& state) {
  const Matrix4c& rho = state.matrix();
  const double coherence = std::abs(rho(0, 2) + rho(1, 3));
  if (coherence > CompositeInvariants::kCoherence) {
    fail(ErrorKind::internal_consistency,
         "probe coherence " + describe(coherence) + " exceeds " +
             describe(CompositeInvariants::kCoherence));
  }
  return DiagonalQubitState(rho(0, 0).real() + rho(1, 1).real(),
                            rho(2, 2).real() + rho(3, 3).real());
}

std::string_view to_string(NonMarkovMethod method) noexcept {
  switch (method) {
    case NonMarkovMethod::automatic:
      return "automatic";
    case NonMarkovMethod::analytic:
      return "analytic";
    case NonMarkovMethod::rk4:
      return "rk4";
  }
  return "unknown";
}

std::vector<NonMarkovPoint> nonmarkov_trajectory(const NonMarkovParams& params,
                                                 std::span<const double> times,
                                                 NonMarkovMethod method, double step) {
  require_sorted(times);
  if (method == NonMarkovMethod::automatic) {
    method = params.underdamped() ? NonMarkovMethod::analytic : NonMarkovMethod::rk4;
  }
  const double beta = params.bath().beta();
  const double h = default_fd_step(beta);
  const NonMarkovParams lower = params.with_beta(beta - h);
  const NonMarkovParams upper = params.with_beta(beta + h);

  std::vector<double> q_mid(times.size()), q_lo(times.size()), q_hi(times.size());
  if (method == NonMarkovMethod::analytic) {
    // Regime errors surface before any work.
    (void)reduced_solution(params);
    for (std::size_t k = 0; k < times.size(); ++k) {
      q_mid[k] = reduced_probe_analytic(params, times[k]).q1();
      q_lo[k] = reduced_probe_analytic(lower, times[k]).q1();
      q_hi[k] = reduced_probe_analytic(upper, times[k]).q1();
    }
  } else {
    if (step <= 0.0) {
      step = std::min({default_composite_step(params), default_composite_step(lower),
                       default_composite_step(upper)});
    }
    const auto fill = [&](const NonMarkovParams& at, std::vector<double>& q) {
      const CompositeTrajectory run = integrate_composite_at(at, times, step);
      for (std::size_t k = 0; k < times.size(); ++k) {
        q[k] = reduced_probe_numeric(run.samples[k].state).q1();
      }
    };
    fill(params, q_mid);
    fill(lower, q_lo);
    fill(upper, q_hi);
  }

  std::vector<NonMarkovPoint> out;
  out.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double dq = (q_hi[k] - q_lo[k]) / (2.0 * h);
    out.push_back({times[k], q_mid[k], qfi_diagonal(q_mid[k], dq)});
  }
  return out;
}

double qfi_nonmarkov(const NonMarkovParams& params, double t, NonMarkovMethod method) {
  const double times[] = {t};
  return nonmarkov_trajectory(params, times, method).front().qfi;
}

}  // namespace thermoq

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "oracles/oracle_values.hpp"
#include "test_support.hpp"
#include "thermoq/error.hpp"
#include "thermoq/nonmarkovian.hpp"
#include "thermoq/qfi.hpp"

using namespace thermoq;
using test::close;
using cd = std::complex<double>;

namespace {

NonMarkovParams fig2_params(double p = 0.0, double beta = 0.2) {
  return NonMarkovParams(ProbeSpec(1.0, p), BathSpec(beta, 1e-4), 10.0);
}

Matrix4c random_density(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix4c g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = cd(normal(rng), normal(rng));
  Matrix4c rho = g * g.adjoint();
  return rho / rho.trace();
}

ErrorKind kind_of(auto&& call) {
  try {
    call();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected thermoq::Error");
  return ErrorKind::internal_consistency;
}

}  // namespace

TEST_CASE("parameters") {
  const auto params = fig2_params();
  CHECK(params.auxiliary_omega() == params.probe().omega());
  CHECK(params.underdamped());
  CHECK(close(params.rates().gamma_T, oracle::kGammaTBeta02, 1e-14));
  const auto shifted = params.with_beta(0.5);
  CHECK(shifted.bath().beta() == 0.5);
  CHECK(shifted.bath().kappa() == params.bath().kappa());
  CHECK(shifted.coupling() == params.coupling());
  CHECK_FALSE(NonMarkovParams(ProbeSpec(1.0, 0.0), BathSpec(0.2, 1e-4), 1e-9).underdamped());
  CHECK(kind_of([] { NonMarkovParams(ProbeSpec(1.0, 0.0), BathSpec(0.2, 1e-4), 0.0); }) ==
        ErrorKind::parameter);
}

TEST_CASE("initial composite state") {
  const auto params = fig2_params(0.1);
  const double pe = oracle::kEquilibriumBeta02;
  const CompositeState s = initial_composite(params);
  const Matrix4c& m = s.matrix();
  CHECK(close(m(0, 0).real(), 0.9 * (1 - pe), 1e-15));
  CHECK(close(m(1, 1).real(), 0.9 * pe, 1e-15));
  CHECK(close(m(2, 2).real(), 0.1 * (1 - pe), 1e-15));
  CHECK(close(m(3, 3).real(), 0.1 * pe, 1e-15));
  CHECK(std::abs(s.trace() - 1.0) <= 1e-15);
  CHECK(close(s.population_imbalance(), pe - 0.1, 1e-14));
  CHECK(s.invariants().ok());

  const CompositeState cold = initial_composite(
      NonMarkovParams(ProbeSpec(1.0, 0.0), BathSpec(1e3, 1e-4), 10.0));
  CHECK(cold.matrix()(0, 0).real() == doctest::Approx(1.0));
}

TEST_CASE("composite state validation") {
  Matrix4c rho = Matrix4c::Zero();
  rho(0, 0) = 0.5;
  rho(1, 1) = 0.5;
  CHECK_NOTHROW(CompositeState{rho});
  Matrix4c bad_trace = rho * 1.1;
  CHECK(kind_of([&] { CompositeState{bad_trace}; }) == ErrorKind::parameter);
  Matrix4c non_hermitian = rho;
  non_hermitian(0, 1) = cd(0.1, 0.0);
  CHECK(kind_of([&] { CompositeState{non_hermitian}; }) == ErrorKind::parameter);
  Matrix4c negative = Matrix4c::Zero();
  negative(0, 0) = 1.2;
  negative(1, 1) = -0.2;
  CHECK(kind_of([&] { CompositeState{negative}; }) == ErrorKind::parameter);
}

TEST_CASE("hamiltonian") {
  const Matrix4c h = composite_hamiltonian(fig2_params());
  CHECK((h - h.adjoint()).norm() == 0.0);
  CHECK(h(0, 0) == cd(-2.0));
  CHECK(h(1, 1) == cd(0.0));
  CHECK(h(2, 2) == cd(0.0));
  CHECK(h(3, 3) == cd(2.0));
  CHECK(h(1, 2) == cd(10.0));
  CHECK(h(2, 1) == cd(10.0));
  CHECK(std::abs(h.sum() - cd(20.0)) == 0.0);
}

TEST_CASE("generator structure") {
  std::mt19937_64 rng(42);
  const auto params = fig2_params();
  for (int i = 0; i < 50; ++i) {
    const Matrix4c rho = random_density(rng);
    const Matrix4c d = gksl_generator(rho, params);
    CHECK(std::abs(d.trace()) <= 1e-13);
    CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("thermal product is a fixed point of pure dissipation") {
  const double pe = thermal_excited_population(1.0, 0.2);
  const auto params = NonMarkovParams(ProbeSpec(1.0, pe), BathSpec(0.2, 1e-4), 1e-300);
  const Matrix4c d = gksl_generator(initial_composite(params).matrix(), params);
  CHECK(d.cwiseAbs().maxCoeff() <= 1e-18);
}

TEST_CASE("auxiliary populations are stationary at t = 0 for a thermal auxiliary") {
  for (double p : {0.0, 0.2, 0.5}) {
    const auto params = fig2_params(p);
    const Matrix4c d = gksl_generator(initial_composite(params).matrix(), params);
    CHECK(std::abs((d(0, 0) + d(2, 2)).real()) <= 1e-18);
  }
}

TEST_CASE("rk4 matches the exact exponential") {
  const auto params = fig2_params();
  const std::vector<double> times(std::begin(oracle::kCompositeTimes),
                                  std::end(oracle::kCompositeTimes));
  const auto traj = integrate_composite_at(params, times, default_composite_step(params));
  REQUIRE(traj.samples.size() == times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const CompositeState& s = traj.samples[i].state;
    CHECK(traj.samples[i].t == times[i]);
    // RK4 phase error accumulates linearly in t at the default step
    const double tol = 5e-9 * times[i] + 1e-9;
    CHECK(std::abs(s.population_imbalance() - oracle::kCompositeImbalance[i]) <= tol);
    CHECK(std::abs(s.auxiliary_ground_population() - oracle::kCompositeAuxGround[i]) <= tol);
    CHECK(std::abs(reduced_probe_numeric(s).q1() - oracle::kCompositeQ1[i]) <= tol);
  }
  CHECK(traj.max_trace_drift <= 1e-10);
}

TEST_CASE("rk4 converges at fourth order") {
  const auto params = fig2_params();
  const std::vector<double> times{10.0};
  const double step = default_composite_step(params);
  const double coarse = integrate_composite_at(params, times, step).samples[0].state.population_imbalance();
  const double fine = integrate_composite_at(params, times, step / 2).samples[0].state.population_imbalance();
  const double exact = oracle::kCompositeImbalance[2];
  const double order = std::log2(std::abs(coarse - exact) / std::abs(fine - exact));
  CHECK(order > 3.8);
  CHECK(order < 4.2);
}

TEST_CASE("invariants hold along a trajectory") {
  const auto params = fig2_params(0.3, 0.5);
  const auto traj = integrate_composite(params, 300.0, default_composite_step(params), 2000);
  CHECK(traj.samples.size() > 10);
  for (const auto& sample : traj.samples) {
    const auto inv = sample.state.invariants();
    CHECK(inv.physical());
    CHECK(inv.probe_coherence <= CompositeInvariants::kCoherence);
  }
  CHECK(traj.max_trace_drift <= 1e-10);
}

TEST_CASE("integration edge cases") {
  const auto params = fig2_params();
  const auto traj = integrate_composite(params, 0.0, default_composite_step(params));
  REQUIRE(traj.samples.size() == 1);
  CHECK(traj.samples[0].state.matrix() == initial_composite(params).matrix());

  const StepBounds bounds = composite_step_bounds(params);
  CHECK(close(bounds.oscillation, 2 * std::numbers::pi / (200 * 20.0), 1e-15));
  CHECK(close(bounds.relaxation, 0.02 / params.rates().gamma_T, 1e-15));
  try {
    integrate_composite(params, 1.0, 1.5 * bounds.limit());
    FAIL("step bound not enforced");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parameter);
    const std::string what = e.what();
    CHECK(what.find("2π/(200·2J)") != std::string::npos);
    CHECK(what.find("0.02/Γ_T") != std::string::npos);
  }
}

TEST_CASE("weak coupling leaves the probe nearly frozen") {
  const auto params = NonMarkovParams(ProbeSpec(1.0, 0.2), BathSpec(0.2, 1e-4), 1e-12);
  const auto traj = integrate_composite(params, 100.0, 0.01, 1000);
  for (const auto& s : traj.samples) {
    CHECK(std::abs(reduced_probe_numeric(s.state).q1() - 0.2) <= 1e-10);
  }
}

TEST_CASE("analytic reduction") {
  const auto params = fig2_params(0.0);
  const auto sol = reduced_solution(params);
  const double pe = oracle::kEquilibriumBeta02;
  CHECK(close(sol.delta0, pe, 1e-14));
  CHECK(close(sol.big_omega, std::sqrt(400.0 - sol.gamma_T * sol.gamma_T / 4), 1e-15));
  CHECK(delta_analytic(params, 0.0) == sol.delta0);
  CHECK(std::abs(delta_analytic(params, 200.0 / sol.gamma_T)) <= 1e-30);
  for (std::size_t i = 0; i < std::size(oracle::kCompositeTimes); ++i) {
    CHECK(close(delta_analytic(params, oracle::kCompositeTimes[i]), oracle::kAnalyticDelta[i],
                1e-9));
  }
  CHECK(reduced_probe_analytic(params, 0.0).q1() == 0.0);
  CHECK(close(reduced_probe_analytic(params, 100.0 / sol.gamma_T).q1(), pe / 2, 1e-12));
  const double half = std::numbers::pi / sol.big_omega;
  CHECK(std::abs(reduced_probe_analytic(params, half).q1() - pe) <= 10 * sol.gamma_T / 10.0);

  // damped oscillator: D'' + gT D' + 4 J^2 D = 0
  for (double t = 0.5; t < 2000.0; t *= 1.7) {
    const double h = 1e-4;
    const double d0 = delta_analytic(params, t);
    const double dp = delta_analytic(params, t + h);
    const double dm = delta_analytic(params, t - h);
    const double second = (dp - 2 * d0 + dm) / (h * h);
    const double first = (dp - dm) / (2 * h);
    const double residual = second + sol.gamma_T * first + 400.0 * d0;
    CHECK(std::abs(residual) <= 1e-6 * 400.0 * std::abs(sol.delta0));
  }
}

TEST_CASE("thermal-matched probe has a constant analytic state") {
  const double pe = thermal_excited_population(1.0, 0.2);
  const NonMarkovParams params(ProbeSpec(1.0, pe), BathSpec(0.2, 1e-4), 10.0);
  CHECK(reduced_solution(params).normalized(123.0) == 1.0);
  CHECK(reduced_probe_analytic(params, 123.0).q1() == doctest::Approx(pe).epsilon(1e-15));
}

TEST_CASE("analytic reduction tracks the exact dynamics at short times") {
  const auto params = fig2_params(0.0);
  const double gamma_T = params.rates().gamma_T;
  const double delta0 = oracle::kEquilibriumBeta02;
  const std::vector<double> times{0.05, 0.2, 1.0, 3.0, 10.0};
  const auto traj = integrate_composite_at(params, times, default_composite_step(params));
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const double gap = traj.samples[i].state.population_imbalance() - delta_analytic(params, t);
    CHECK(std::abs(gap) <= 2.0 * gamma_T * t * delta0 + 1e-9);
  }
}

TEST_CASE("analytic path refuses the overdamped regime") {
  const NonMarkovParams params(ProbeSpec(1.0, 0.0), BathSpec(0.2, 1e-4), 1e-9);
  try {
    reduced_solution(params);
    FAIL("regime not enforced");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::regime);
    CHECK(std::string(e.what()).find("use rk4") != std::string::npos);
  }
  CHECK(kind_of([&] { delta_analytic(params, 1.0); }) == ErrorKind::regime);
  const std::vector<double> grid{0.0, 10.0};
  CHECK_NOTHROW(nonmarkov_trajectory(params, grid, NonMarkovMethod::rk4, 0.01));
  CHECK(kind_of([&] { nonmarkov_trajectory(params, grid, NonMarkovMethod::analytic); }) ==
        ErrorKind::regime);
}

TEST_CASE("partial trace") {
  Eigen::Matrix2cd probe = Eigen::Matrix2cd::Zero();
  probe(0, 0) = 0.7;
  probe(1, 1) = 0.3;
  Eigen::Matrix2cd aux;
  aux << 0.6, cd(0.1, 0.05), cd(0.1, -0.05), 0.4;
  Matrix4c product;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) product(2 * i + k, 2 * j + l) = probe(i, j) * aux(k, l);
  const auto reduced = reduced_probe_numeric(CompositeState(product));
  CHECK(reduced.q1() == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(reduced.q0() + reduced.q1() == doctest::Approx(1.0).epsilon(1e-15));

  Matrix4c coherent = Matrix4c::Zero();
  coherent(0, 0) = coherent(2, 2) = 0.5;
  coherent(0, 2) = coherent(2, 0) = 0.2;
  CHECK(kind_of([&] { reduced_probe_numeric(CompositeState(coherent)); }) ==
        ErrorKind::internal_consistency);
}

TEST_CASE("non-markovian qfi") {
  const auto params = fig2_params(0.0);
  const double gamma_T = params.rates().gamma_T;
  CHECK(qfi_nonmarkov(params, 0.0) == 0.0);
  const double late = qfi_nonmarkov(params, 20.0 / gamma_T);
  CHECK(close(late, oracle::kSteadyQfiBeta02P0, 1e-2));
  const double hot_late = qfi_nonmarkov(fig2_params(0.5), 20.0 / gamma_T);
  CHECK(close(hot_late, oracle::kSteadyQfiBeta02P05, 1e-2));

  const std::vector<double> grid{0.0, 1.0, 2.5, 40.0};
  const auto automatic = nonmarkov_trajectory(params, grid, NonMarkovMethod::automatic);
  const auto analytic = nonmarkov_trajectory(params, grid, NonMarkovMethod::analytic);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(automatic[i].q1 == analytic[i].q1);
    CHECK(automatic[i].qfi == analytic[i].qfi);
  }
  const auto rk4 = nonmarkov_trajectory(params, grid, NonMarkovMethod::rk4);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(rk4[i].q1 - analytic[i].q1) <= 2.0 * gamma_T * grid[i] + 1e-9);
  }
  CHECK(to_string(NonMarkovMethod::rk4) == "rk4");
}

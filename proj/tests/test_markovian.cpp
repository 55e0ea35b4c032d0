#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles/oracle_values.hpp"
#include "test_support.hpp"
#include "thermoq/error.hpp"
#include "thermoq/markovian.hpp"

using namespace thermoq;
using test::close;

TEST_CASE("closed form anchors") {
  const ProbeSpec probe(1.0, 0.0);
  const BathSpec bath(0.5, 1e-4);
  const double pe = equilibrium_population(probe, bath);
  const double lambda = rates(probe, bath).lambda;
  CHECK(evolve_closed_form(probe, bath, 0.0).q1() == 0.0);
  CHECK(std::abs(evolve_closed_form(probe, bath, 1e9 / std::abs(lambda)).q1() - pe) <= 1e-12);
  CHECK(close(evolve_closed_form(probe, bath, 4295.7).q1(), oracle::kQ1At4295_7, 1e-13));
  CHECK_THROWS_AS(evolve_closed_form(probe, bath, -1.0), Error);
}

TEST_CASE("interpolation identity and population bounds") {
  test::Draws draws(11);
  for (int i = 0; i < 100; ++i) {
    const ProbeSpec probe = draws.probe();
    const BathSpec bath = draws.bath();
    const double pe = equilibrium_population(probe, bath);
    const double lambda = rates(probe, bath).lambda;
    const double lo = std::min(probe.p(), pe), hi = std::max(probe.p(), pe);
    for (int k = 0; k <= 20; ++k) {
      const double t = k * 0.5 / std::abs(lambda);
      const double q = evolve_closed_form(probe, bath, t).q1();
      CHECK(q >= lo - 1e-15);
      CHECK(q <= hi + 1e-15);
      if (std::abs(probe.p() - pe) > 1e-3) {
        CHECK(close((q - pe) / (probe.p() - pe), std::exp(lambda * t), 1e-10));
      }
    }
  }
}

TEST_CASE("rk4 matches the closed form") {
  const ProbeSpec probe(1.0, 0.0);
  const BathSpec bath(0.5, 1e-4);
  const double scale = 1.0 / std::abs(rates(probe, bath).lambda);
  const auto traj = evolve_ode(probe, bath, 5 * scale, 0.01 * scale);
  REQUIRE(traj.samples.size() == 501);
  double worst = 0.0;
  for (const auto& s : traj.samples) {
    worst = std::max(worst, std::abs(s.state.q1() - evolve_closed_form(probe, bath, s.t).q1()));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("rk4 edge cases") {
  const ProbeSpec probe(1.0, 0.1);
  const BathSpec bath(0.5, 1e-4);
  const double step = default_markov_step(probe, bath);
  const auto single = evolve_ode(probe, bath, 0.0, step);
  REQUIRE(single.samples.size() == 1);
  CHECK(single.samples[0].state.q1() == 0.1);

  const double pe = equilibrium_population(probe, bath);
  const ProbeSpec thermal(1.0, pe);
  const auto fixed = evolve_ode(thermal, bath, 3 * default_markov_horizon(thermal, bath), step);
  for (const auto& s : fixed.samples) CHECK(std::abs(s.state.q1() - pe) <= 1e-12);

  try {
    evolve_ode(probe, bath, 1000.0, 1.01 * max_markov_step(probe, bath));
    FAIL("step bound not enforced");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parameter);
    CHECK(std::string(e.what()).find("0.05/|lambda|") != std::string::npos);
  }
  CHECK_THROWS_AS(evolve_ode(probe, bath, 10.0, 0.0), Error);
}

TEST_CASE("trajectory sampling") {
  const ProbeSpec probe(1.0, 0.0);
  const BathSpec bath(0.5, 1e-4);
  const std::vector<double> zero{0.0};
  CHECK(sample_trajectory(probe, bath, zero).samples.at(0).state.q1() == 0.0);

  const std::vector<double> grid{10.0, 500.0, 3000.0};
  const auto traj = sample_trajectory(probe, bath, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(traj.samples[i].state == evolve_closed_form(probe, bath, grid[i]));
  }

  const double scale = 1.0 / std::abs(rates(probe, bath).lambda);
  std::vector<double> geometric;
  for (double x = 1e-3; x <= 10.0; x *= 1.1) geometric.push_back(x * scale);
  const auto mono = sample_trajectory(probe, bath, geometric);
  for (std::size_t i = 1; i < mono.samples.size(); ++i) {
    CHECK(mono.samples[i].state.q1() > mono.samples[i - 1].state.q1());
  }

  const std::vector<double> unsorted{1.0, 0.5};
  CHECK_THROWS_AS(sample_trajectory(probe, bath, unsorted), Error);
  const std::vector<double> negative{-1.0, 0.5};
  CHECK_THROWS_AS(sample_trajectory(probe, bath, negative), Error);
}

TEST_CASE("uniform grid") {
  CHECK(uniform_grid(0.0, 1) == std::vector<double>{0.0});
  const auto g = uniform_grid(4.0, 5);
  CHECK(g == std::vector<double>{0.0, 1.0, 2.0, 3.0, 4.0});
  CHECK_THROWS_AS(uniform_grid(0.0, 3), Error);
  CHECK_THROWS_AS(uniform_grid(1.0, 0), Error);
}

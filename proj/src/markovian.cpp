#include "thermoq/markovian.hpp"

#include <cmath>
#include <string>

#include "detail/describe.hpp"
#include "detail/rk4.hpp"
#include "thermoq/error.hpp"

namespace thermoq {
namespace {

void require_time(double t) {
  if (!std::isfinite(t) || t < 0.0) {
    fail(ErrorKind::parameter,
         "time must be finite and >= 0 (got " + detail::describe(t) + ")");
  }
}

void require_increasing(std::span<const double> times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    require_time(times[i]);
    if (i > 0 && !(times[i] > times[i - 1])) {
      fail(ErrorKind::parameter, "time grid must be strictly increasing (index " +
                                     std::to_string(i) + ")");
    }
  }
}

}  // namespace

DiagonalQubitState evolve_closed_form(const ProbeSpec& probe,
                                      const BathSpec& bath, double t) {
  require_time(t);
  const double pe = equilibrium_population(probe, bath);
  const double decay = std::exp(rates(probe, bath).lambda * t);
  return DiagonalQubitState::from_excited(pe + decay * (probe.p() - pe));
}

double max_markov_step(const ProbeSpec& probe, const BathSpec& bath) {
  return 0.05 / std::abs(rates(probe, bath).lambda);
}

double default_markov_step(const ProbeSpec& probe, const BathSpec& bath) {
  return 0.01 / std::abs(rates(probe, bath).lambda);
}

double default_markov_horizon(const ProbeSpec& probe, const BathSpec& bath) {
  return 8.0 / std::abs(rates(probe, bath).lambda);
}

MarkovTrajectory evolve_ode(const ProbeSpec& probe, const BathSpec& bath,
                            double t_max, double step) {
  require_time(t_max);
  std::vector<double> times{0.0};
  if (t_max > 0.0) {
    if (!(step > 0.0)) {
      fail(ErrorKind::parameter, "step must be > 0");
    }
    const std::size_t n = detail::substeps(t_max, step);
    times.reserve(n + 1);
    for (std::size_t k = 1; k <= n; ++k) {
      times.push_back(k == n ? t_max : t_max * static_cast<double>(k) / n);
    }
  }
  return evolve_ode_at(probe, bath, times, step);
}

MarkovTrajectory evolve_ode_at(const ProbeSpec& probe, const BathSpec& bath,
                               std::span<const double> times, double step) {
  require_increasing(times);
  const RateSet r = rates(probe, bath);
  const double bound = 0.05 / std::abs(r.lambda);
  if (times.size() > 1 || (times.size() == 1 && times[0] > 0.0)) {
    if (!(step > 0.0) || step > bound * (1.0 + 1e-12)) {
      fail(ErrorKind::parameter,
           "step must satisfy 0 < step <= 0.05/|lambda| = " +
               detail::describe(bound) + " (got " + detail::describe(step) + ")");
    }
  }

  const auto rhs = [&r](double, double q1) {
    return r.gamma_up * (1.0 - q1) - r.gamma_down * q1;
  };

  MarkovTrajectory out{probe, bath, {}};
  out.samples.reserve(times.size());
  double t = 0.0;
  double q1 = probe.p();
  for (const double target : times) {
    const std::size_t n = detail::substeps(target - t, step);
    const double h = n > 0 ? (target - t) / static_cast<double>(n) : 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      q1 = detail::rk4_step(rhs, t, q1, h);
      t += h;
    }
    t = target;
    out.samples.push_back({t, DiagonalQubitState::from_excited(q1)});
  }
  return out;
}

MarkovTrajectory sample_trajectory(const ProbeSpec& probe, const BathSpec& bath,
                                   std::span<const double> t_grid) {
  require_increasing(t_grid);
  MarkovTrajectory out{probe, bath, {}};
  out.samples.reserve(t_grid.size());
  for (const double t : t_grid) {
    out.samples.push_back({t, evolve_closed_form(probe, bath, t)});
  }
  return out;
}

std::vector<double> uniform_grid(double t_max, std::size_t samples) {
  require_time(t_max);
  if (samples == 0) fail(ErrorKind::parameter, "samples must be >= 1");
  if (samples > 1 && t_max == 0.0) {
    fail(ErrorKind::parameter,
         "a grid with more than one sample needs t_max > 0");
  }
  std::vector<double> grid(samples, 0.0);
  for (std::size_t k = 1; k < samples; ++k) {
    grid[k] = k + 1 == samples
                  ? t_max
                  : t_max * static_cast<double>(k) /
                        static_cast<double>(samples - 1);
  }
  return grid;
}

}  // namespace thermoq

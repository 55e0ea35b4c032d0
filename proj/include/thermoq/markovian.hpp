#pragma once

// Probe dynamics under the qubit GKSL equation with a bosonic bath. The
// populations obey dq1/dt = G_up (1 - q1) - G_down q1, so
// q1(t) = p^e + e^{lambda t} (p - p^e) with lambda = -(G_up + G_down).

#include <cstddef>
#include <span>
#include <vector>

#include "thermoq/core_physics.hpp"

namespace thermoq {

struct MarkovSample {
  double t;
  DiagonalQubitState state;
};

struct MarkovTrajectory {
  ProbeSpec probe;
  BathSpec bath;
  std::vector<MarkovSample> samples;  // strictly increasing t
};

DiagonalQubitState evolve_closed_form(const ProbeSpec& probe,
                                      const BathSpec& bath, double t);

/// Largest accepted RK4 step, 0.05 / |lambda|.
double max_markov_step(const ProbeSpec& probe, const BathSpec& bath);
/// 0.01 / |lambda|.
double default_markov_step(const ProbeSpec& probe, const BathSpec& bath);
/// 8 / |lambda|: long enough to cover the transient peak.
double default_markov_horizon(const ProbeSpec& probe, const BathSpec& bath);

/// Fixed-step RK4 on the population equation, one sample per step. The step
/// is shrunk so that the last sample lands exactly on t_max.
MarkovTrajectory evolve_ode(const ProbeSpec& probe, const BathSpec& bath,
                            double t_max, double step);

/// RK4 integration reporting the state at each requested time (sorted,
/// nonnegative); every interval is split into equal substeps <= step.
MarkovTrajectory evolve_ode_at(const ProbeSpec& probe, const BathSpec& bath,
                               std::span<const double> times, double step);

/// Closed-form evaluation on a strictly increasing, nonnegative grid.
MarkovTrajectory sample_trajectory(const ProbeSpec& probe, const BathSpec& bath,
                                   std::span<const double> t_grid);

/// samples points evenly spaced over [0, t_max]; {0} when samples == 1.
std::vector<double> uniform_grid(double t_max, std::size_t samples);

}  // namespace thermoq

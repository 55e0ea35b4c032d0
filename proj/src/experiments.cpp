#include "thermoq/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "detail/describe.hpp"
#include "detail/golden_section.hpp"
#include "detail/parallel.hpp"
#include "thermoq/error.hpp"
#include "thermoq/markovian.hpp"
#include "thermoq/nonmarkovian.hpp"

namespace thermoq {

using detail::describe;

double PopulationChoice::resolve(double equilibrium) const {
  const double p = relative_ ? equilibrium + value_ : value_;
  if (!std::isfinite(p)) fail(ErrorKind::parameter, "population must be finite");
  return relative_ ? std::clamp(p, 0.0, 0.5) : p;
}

ScanGrid ScanGrid::defaults() {
  ScanGrid grid;
  grid.betas = {0.1, 0.2, 0.5, 1.0, 2.0};
  grid.omegas = {0.5, 1.0, 2.0};
  grid.kappa = 1e-4;
  grid.populations = {PopulationChoice::absolute(0.0),
                      PopulationChoice::absolute(0.05),
                      PopulationChoice::absolute(0.15),
                      PopulationChoice::equilibrium_offset(-0.02),
                      PopulationChoice::equilibrium_offset(0.0),
                      PopulationChoice::equilibrium_offset(0.02),
                      PopulationChoice::absolute(0.35),
                      PopulationChoice::absolute(0.5)};
  return grid;
}

std::string_view to_string(Verdict v) noexcept {
  return v == Verdict::consistent ? "consistent" : "violation";
}

ScanPoint scan_point(const ProbeSpec& probe, const BathSpec& bath,
                     const RatioSearchOptions& options) {
  const ProbeClass cls = classify(probe, bath);
  const RatioMaximum best = maximize_ratio(probe, bath, options);
  ScanPoint point{probe, bath, cls, best.r_max, best.t_at_max,
                  std::nullopt, std::nullopt, Verdict::consistent};
  if (const auto t_c = critical_time(probe, bath)) {
    point.t_c = *t_c;
    point.r_at_tc = qfi_ratio(probe, bath, *t_c);
  }
  // Deep in the cold regime r(t_c) - 1 can underflow; its sign is then read
  // from the scaled excess.
  const bool enhanced =
      best.r_max > 1.0 || (point.t_c && scaled_ratio_excess(probe, bath, *point.t_c) > 0.0);
  const bool holds = cls == ProbeClass::cold ? enhanced
                                             : best.r_max <= 1.0 + kHotRatioTolerance;
  point.verdict = holds ? Verdict::consistent : Verdict::violation;
  return point;
}

ScanReport theorem_scan(const ScanGrid& grid, unsigned jobs) {
  const std::size_t n_omega = grid.omegas.size();
  const std::size_t n_pop = grid.populations.size();
  const std::size_t total = grid.size();
  std::vector<std::optional<ScanPoint>> slots(total);

  detail::parallel_for(total, jobs, [&](std::size_t index) {
    const double beta = grid.betas[index / (n_omega * n_pop)];
    const double omega = grid.omegas[(index / n_pop) % n_omega];
    const PopulationChoice& choice = grid.populations[index % n_pop];
    try {
      const BathSpec bath(beta, grid.kappa);
      const double pe = thermal_excited_population(omega, beta);
      const ProbeSpec probe(omega, choice.resolve(pe));
      slots[index] = scan_point(probe, bath);
    } catch (const Error& e) {
      throw Error(e.kind(), "grid point " + std::to_string(index) + " (beta=" +
                                describe(beta) + ", omega=" + describe(omega) +
                                "): " + e.what());
    }
  });

  ScanReport report;
  report.points.reserve(total);
  for (auto& slot : slots) {
    if (slot->verdict == Verdict::violation) ++report.violations;
    report.points.push_back(std::move(*slot));
  }
  return report;
}

namespace {

// QFI of the analytic reduced probe state with the beta-derivative taken by
// central differences; reduced solutions at beta, beta +- h are precomputed.
class AnalyticQfi {
 public:
  explicit AnalyticQfi(const NonMarkovParams& params)
      : p_(params.probe().p()),
        h_(default_fd_step(params.bath().beta())),
        mid_(reduced_solution(params)),
        lo_(reduced_solution(params.with_beta(params.bath().beta() - h_))),
        hi_(reduced_solution(params.with_beta(params.bath().beta() + h_))) {}

  double population(double t) const { return population(mid_, t); }

  double operator()(double t) const {
    const double dq = (population(hi_, t) - population(lo_, t)) / (2.0 * h_);
    return qfi_diagonal(population(mid_, t), dq);
  }

 private:
  double population(const ReducedSolution& s, double t) const {
    return DiagonalQubitState::from_excited(p_ + 0.5 * s.delta0 * (1.0 - s.normalized(t))).q1();
  }

  double p_;
  double h_;
  ReducedSolution mid_;
  ReducedSolution lo_;
  ReducedSolution hi_;
};

Fig2Entry fig2_entry(const Fig2Config& config, double beta, double p) {
  const NonMarkovParams params(ProbeSpec(config.omega, p), BathSpec(beta, config.kappa),
                               config.coupling);
  if (!params.underdamped()) {
    fail(ErrorKind::regime, "not underdamped at beta=" + describe(beta) + ", p=" + describe(p));
  }
  const AnalyticQfi qfi(params);
  const ReducedSolution solution = reduced_solution(params);
  const double gamma_T = params.rates().gamma_T;
  const double t_max = config.horizon / gamma_T;

  Fig2Entry entry{beta, p, uniform_grid(t_max, config.samples), {}, {}, 0.0, 0.0, 0.0, 0};
  entry.q1.reserve(entry.times.size());
  entry.qfi.reserve(entry.times.size());
  for (const double t : entry.times) {
    entry.q1.push_back(qfi.population(t));
    entry.qfi.push_back(qfi(t));
  }

  // Search grid: `resolution` points per half period of the oscillation.
  const double spacing =
      std::numbers::pi / solution.big_omega / static_cast<double>(config.resolution);
  const auto n = static_cast<std::size_t>(std::ceil(t_max / spacing)) + 1;
  const double relaxation_time = 1.0 / gamma_T;
  std::size_t best = 0;
  double best_value = qfi(0.0);
  double before = best_value;
  double current = qfi(std::min(spacing, t_max));
  if (current > best_value) {
    best = 1;
    best_value = current;
  }
  for (std::size_t k = 2; k < n; ++k) {
    const double t = std::min(spacing * static_cast<double>(k), t_max);
    const double next = qfi(t);
    if (next > best_value) {
      best = k;
      best_value = next;
    }
    if (spacing * static_cast<double>(k - 1) <= relaxation_time && current > before &&
        current > next) {
      ++entry.local_maxima;
    }
    before = current;
    current = next;
  }

  const double lo = spacing * static_cast<double>(best == 0 ? 0 : best - 1);
  const double hi = std::min(spacing * static_cast<double>(best + 1), t_max);
  const detail::ScalarMaximum refined = detail::golden_section_maximize(qfi, lo, hi, 1e-10);
  if (refined.value >= best_value) {
    entry.max_qfi = refined.value;
    entry.t_at_max = refined.x;
  } else {
    entry.max_qfi = best_value;
    entry.t_at_max = std::min(spacing * static_cast<double>(best), t_max);
  }
  entry.asymptotic_qfi = qfi(config.asymptote_time / gamma_T);
  return entry;
}

}  // namespace

Fig2Report fig2_run(const Fig2Config& config) {
  if (config.betas.empty() || config.populations.empty()) {
    fail(ErrorKind::parameter, "fig2 needs at least one beta and one population");
  }
  if (!(config.horizon > 0.0) || !(config.asymptote_time > 0.0) || config.samples < 2 ||
      config.resolution < 2) {
    fail(ErrorKind::parameter,
         "fig2 needs horizon > 0, asymptote time > 0, samples >= 2 and resolution >= 2");
  }
  const std::size_t n_pop = config.populations.size();
  Fig2Report report{config, std::vector<Fig2Entry>(config.betas.size() * n_pop), {}};
  detail::parallel_for(report.entries.size(), config.jobs, [&](std::size_t i) {
    report.entries[i] = fig2_entry(config, config.betas[i / n_pop], config.populations[i % n_pop]);
  });

  for (std::size_t b = 0; b < config.betas.size(); ++b) {
    const double beta = config.betas[b];
    const RateSet r = rates(ProbeSpec(config.omega, 0.0), BathSpec(beta, config.kappa));
    double hi = 0.0;
    double lo = INFINITY;
    for (std::size_t j = 0; j < n_pop; ++j) {
      hi = std::max(hi, report.entries[b * n_pop + j].max_qfi);
      lo = std::min(lo, report.entries[b * n_pop + j].max_qfi);
    }
    report.per_beta.push_back({beta, r.gamma_T, config.horizon / r.gamma_T,
                               thermal_qfi(config.omega, beta), hi > 0.0 ? (hi - lo) / hi : 0.0});
  }
  return report;
}

std::string_view to_string(MarkovMethod m) noexcept {
  return m == MarkovMethod::closed_form ? "closed" : "ode";
}

std::vector<MarkovTraceRow> markov_trace_run(const ProbeSpec& probe, const BathSpec& bath,
                                             double t_max, std::size_t samples,
                                             MarkovMethod method) {
  const std::vector<double> grid = uniform_grid(t_max, samples);
  const double f_thermal = thermal_qfi(probe.omega(), bath.beta());
  std::vector<MarkovTraceRow> rows;
  rows.reserve(grid.size());

  if (method == MarkovMethod::closed_form) {
    for (const double t : grid) {
      const double q1 = evolve_closed_form(probe, bath, t).q1();
      const double dq = analytic_dq_dbeta(probe, bath, t);
      rows.push_back({t, q1, dq, qfi_diagonal(q1, dq), qfi_ratio(probe, bath, t)});
    }
    return rows;
  }

  const double h = default_fd_step(bath.beta());
  const BathSpec lower(bath.beta() - h, bath.kappa());
  const BathSpec upper(bath.beta() + h, bath.kappa());
  const double step = std::min({default_markov_step(probe, bath),
                                default_markov_step(probe, lower),
                                default_markov_step(probe, upper)});
  const MarkovTrajectory mid = evolve_ode_at(probe, bath, grid, step);
  const MarkovTrajectory lo = evolve_ode_at(probe, lower, grid, step);
  const MarkovTrajectory hi = evolve_ode_at(probe, upper, grid, step);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double q1 = mid.samples[k].state.q1();
    const double dq = (hi.samples[k].state.q1() - lo.samples[k].state.q1()) / (2.0 * h);
    const double f = qfi_diagonal(q1, dq);
    rows.push_back({grid[k], q1, dq, f, f / f_thermal});
  }
  return rows;
}

}  // namespace thermoq

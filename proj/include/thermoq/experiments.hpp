#pragma once

// Parameter sweeps: the Markovian hot/cold enhancement scan, the probe +
// auxiliary QFI comparison between an initially cold and hot probe, and a
// per-sample Markovian trace for plotting.

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "thermoq/core_physics.hpp"
#include "thermoq/qfi.hpp"

namespace thermoq {

/// A probe population either given directly or as an offset from the
/// equilibrium population at each grid point; resolved values are clamped
/// into [0, 1/2].
class PopulationChoice {
 public:
  static PopulationChoice absolute(double p) { return PopulationChoice(false, p); }
  static PopulationChoice equilibrium_offset(double offset) {
    return PopulationChoice(true, offset);
  }

  bool relative() const noexcept { return relative_; }
  double value() const noexcept { return value_; }
  double resolve(double equilibrium) const;

 private:
  PopulationChoice(bool relative, double value) : relative_(relative), value_(value) {}
  bool relative_;
  double value_;
};

struct ScanGrid {
  std::vector<double> betas;
  std::vector<double> omegas;
  double kappa = 1e-4;
  std::vector<PopulationChoice> populations;

  /// beta in {0.1, 0.2, 0.5, 1, 2}, omega in {0.5, 1, 2}, kappa = 1e-4,
  /// p in {0, 0.05, 0.15, p^e - 0.02, p^e, p^e + 0.02, 0.35, 0.5}.
  static ScanGrid defaults();
  std::size_t size() const noexcept {
    return betas.size() * omegas.size() * populations.size();
  }
};

enum class Verdict { consistent, violation };

std::string_view to_string(Verdict v) noexcept;

/// Tolerance on r <= 1 for hot and thermal probes.
inline constexpr double kHotRatioTolerance = 1e-9;

struct ScanPoint {
  ProbeSpec probe;
  BathSpec bath;
  ProbeClass classification;
  double r_max;
  double t_at_rmax;
  std::optional<double> t_c;
  std::optional<double> r_at_tc;
  Verdict verdict;
};

struct ScanReport {
  std::vector<ScanPoint> points;
  std::size_t violations = 0;
};

ScanPoint scan_point(const ProbeSpec& probe, const BathSpec& bath,
                     const RatioSearchOptions& options = {});

/// Points ordered beta-major, then omega, then population. An invalid point
/// raises ErrorKind::parameter naming its index.
ScanReport theorem_scan(const ScanGrid& grid, unsigned jobs = 1);

struct Fig2Config {
  double kappa = 5e-5;  // gamma = kappa * 2 omega = 1e-4
  double coupling = 10.0;
  double omega = 1.0;
  std::vector<double> betas{0.2, 0.5};
  std::vector<double> populations{0.0, 0.5};
  double horizon = 4.0;          // t_max = horizon / gamma_T, per beta
  double asymptote_time = 20.0;  // asymptotic QFI at asymptote_time / gamma_T
  std::size_t samples = 4001;    // output trajectory points
  std::size_t resolution = 16;   // search grid points per half oscillation
  unsigned jobs = 1;
};

struct Fig2Entry {
  double beta;
  double p;
  std::vector<double> times;
  std::vector<double> q1;
  std::vector<double> qfi;
  double max_qfi;
  double t_at_max;
  double asymptotic_qfi;
  std::size_t local_maxima;  // strict maxima of the QFI over [0, 1/gamma_T]
};

struct Fig2BetaSummary {
  double beta;
  double gamma_T;
  double t_max;
  double predicted_max;  // thermal QFI 4 omega^2 p^e (1 - p^e)
  double max_gap;        // (max - min) / max over the populations at this beta
};

struct Fig2Report {
  Fig2Config config;
  std::vector<Fig2Entry> entries;  // beta-major, then population
  std::vector<Fig2BetaSummary> per_beta;
};

/// Analytic probe + auxiliary QFI trajectories. Maxima come from a grid that
/// resolves every oscillation, refined by golden-section search. Raises
/// ErrorKind::regime if any point is not underdamped.
Fig2Report fig2_run(const Fig2Config& config);

struct MarkovTraceRow {
  double t;
  double q1;
  double dq_dbeta;
  double qfi;
  double ratio;
};

enum class MarkovMethod { closed_form, ode };

std::string_view to_string(MarkovMethod m) noexcept;

/// samples rows evenly spaced over [0, t_max]. closed_form uses the analytic
/// derivative and r = delta^2/alpha; ode integrates with RK4 at beta and
/// beta +- h and differentiates numerically.
std::vector<MarkovTraceRow> markov_trace_run(const ProbeSpec& probe, const BathSpec& bath,
                                             double t_max, std::size_t samples,
                                             MarkovMethod method = MarkovMethod::closed_form);

}  // namespace thermoq

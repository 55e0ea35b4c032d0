#include "thermoq/qfi.hpp"

#include <algorithm>
#include <cmath>

#include "detail/describe.hpp"
#include "detail/golden_section.hpp"
#include "thermoq/error.hpp"
#include "thermoq/markovian.hpp"

namespace thermoq {
namespace {

struct Frame {
  double p;
  double pe;
  double pe_var;  // p^e (1 - p^e)
  RateSet rates;
};

Frame frame_for(const ProbeSpec& probe, const BathSpec& bath) {
  Frame f{probe.p(), equilibrium_population(probe, bath), 0.0,
          rates(probe, bath)};
  f.pe_var = f.pe * (1.0 - f.pe);
  if (!(f.pe_var > 0.0)) {
    fail(ErrorKind::degenerate_state,
         "equilibrium population underflows at omega*beta = " +
             detail::describe(probe.omega() * bath.beta()));
  }
  return f;
}

void require_time(double t) {
  if (!std::isfinite(t) || t < 0.0) {
    fail(ErrorKind::parameter,
         "time must be finite and >= 0 (got " + detail::describe(t) + ")");
  }
}

double derivative_factor(const Frame& f, double t) {
  const double lambda = f.rates.lambda;
  const double decay = std::exp(lambda * t);
  return -std::expm1(lambda * t) +
         2.0 * t * (f.pe - f.p) * (lambda * lambda / f.rates.gamma) * decay;
}

// Sum of nonnegative terms; free of cancellation as t -> 0.
double variance_factor(const Frame& f, double t) {
  const double decay = std::exp(f.rates.lambda * t);
  const double relaxed = -std::expm1(f.rates.lambda * t);
  return relaxed * relaxed +
         decay * relaxed * (f.p / f.pe + (1.0 - f.p) / (1.0 - f.pe)) +
         decay * decay * (f.p * (1.0 - f.p)) / f.pe_var;
}

double ratio(double delta, double alpha) {
  return delta == 0.0 ? 0.0 : delta * delta / alpha;
}

ProbeClass classify(const Frame& f) {
  if (std::abs(f.p - f.pe) <= kThermalTolerance) return ProbeClass::thermal;
  return f.p < f.pe ? ProbeClass::cold : ProbeClass::hot;
}

}  // namespace

std::string_view to_string(ProbeClass c) noexcept {
  switch (c) {
    case ProbeClass::cold:
      return "cold";
    case ProbeClass::hot:
      return "hot";
    case ProbeClass::thermal:
      return "thermal";
  }
  return "unknown";
}

ProbeClass classify(const ProbeSpec& probe, const BathSpec& bath) {
  return classify(frame_for(probe, bath));
}

TheoremQuantities theorem_quantities(const ProbeSpec& probe,
                                     const BathSpec& bath, double t) {
  require_time(t);
  const Frame f = frame_for(probe, bath);
  const double lambda = f.rates.lambda;
  TheoremQuantities q{};
  q.derivative_factor = derivative_factor(f, t);
  q.variance_factor = variance_factor(f, t);
  q.variance_quadratic = (f.pe - f.p) * (f.pe - f.p) / f.pe_var;
  q.variance_linear = (f.pe - f.p) * (2.0 * f.pe - 1.0) / f.pe_var;
  q.stationary_rate = 2.0 * (f.pe - f.p) * lambda * lambda / f.rates.gamma;
  q.ratio = ratio(q.derivative_factor, q.variance_factor);
  q.classification = classify(f);
  return q;
}

double derivative_factor(const ProbeSpec& probe, const BathSpec& bath,
                         double t) {
  require_time(t);
  return derivative_factor(frame_for(probe, bath), t);
}

double variance_factor(const ProbeSpec& probe, const BathSpec& bath, double t) {
  require_time(t);
  return variance_factor(frame_for(probe, bath), t);
}

double qfi_ratio(const ProbeSpec& probe, const BathSpec& bath, double t) {
  require_time(t);
  const Frame f = frame_for(probe, bath);
  return ratio(derivative_factor(f, t), variance_factor(f, t));
}

double scaled_ratio_excess(const ProbeSpec& probe, const BathSpec& bath, double t) {
  require_time(t);
  if (t == 0.0) return -1.0;
  const Frame f = frame_for(probe, bath);
  const double lambda = f.rates.lambda;
  const double gap = f.pe - f.p;
  const double n = 2.0 * gap * lambda * lambda / f.rates.gamma;
  const double a = gap * gap / f.pe_var;
  const double b = gap * (2.0 * f.pe - 1.0) / f.pe_var;
  // delta = 1 + e u with u = n t - 1, so delta^2 - alpha = e (2u - b + e (u^2 + a))
  const double u = n * t - 1.0;
  const double decay = std::exp(lambda * t);
  return (2.0 * u - b + decay * (u * u + a)) / variance_factor(f, t);
}

double qfi_diagonal(double q1, double dq1_dbeta) {
  if (!std::isfinite(q1) || q1 < 0.0 || q1 > 1.0) {
    fail(ErrorKind::parameter,
         "population must lie in [0, 1] (got " + detail::describe(q1) + ")");
  }
  if (dq1_dbeta == 0.0) return 0.0;
  const double variance = q1 * (1.0 - q1);
  if (variance < 1e-300) {
    fail(ErrorKind::degenerate_state,
         "QFI undefined for a pure state with non-zero derivative (q1=" +
             detail::describe(q1) + ")");
  }
  return dq1_dbeta * dq1_dbeta / variance;
}

double thermal_qfi(double omega, double beta) {
  const double pe = thermal_excited_population(omega, beta);
  return 4.0 * omega * omega * pe * (1.0 - pe);
}

std::optional<double> critical_time(const ProbeSpec& probe,
                                    const BathSpec& bath) {
  const Frame f = frame_for(probe, bath);
  if (classify(f) != ProbeClass::cold) return std::nullopt;
  const double lambda = f.rates.lambda;
  const double n = 2.0 * (f.pe - f.p) * lambda * lambda / f.rates.gamma;
  return (lambda - n) / (n * lambda);
}

double analytic_dq_dbeta(const ProbeSpec& probe, const BathSpec& bath,
                         double t) {
  require_time(t);
  const Frame f = frame_for(probe, bath);
  const double dq = -2.0 * probe.omega() * f.pe_var * derivative_factor(f, t);
  return dq == 0.0 ? 0.0 : dq;
}

double default_fd_step(double beta) { return std::max(1e-6, 1e-5 * beta); }

double finite_difference_dq_dbeta(
    const std::function<double(double)>& q1_of_beta, double beta, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    fail(ErrorKind::parameter,
         "finite-difference step must be > 0 (got " + detail::describe(h) + ")");
  }
  return (q1_of_beta(beta + h) - q1_of_beta(beta - h)) / (2.0 * h);
}

double markov_fd_dq_dbeta(const ProbeSpec& probe, const BathSpec& bath,
                          double t, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    fail(ErrorKind::parameter, "finite-difference step must be finite and > 0");
  }
  // q(b+h) - q(b-h) = (pe+ - pe-)(1 - E-) + (p - pe+)(E+ - E-), with
  // E+ - E- = E- expm1(-2 gamma (eta+ - eta-) t). Subtracting q directly loses
  // everything when d_beta q is tiny next to q, as for cold baths.
  const BathSpec up(bath.beta() + h, bath.kappa());
  const BathSpec down(bath.beta() - h, bath.kappa());
  const RateSet r_up = rates(probe, up);
  const RateSet r_down = rates(probe, down);
  const double pe_up = equilibrium_population(probe, up);
  const double pe_down = equilibrium_population(probe, down);
  const double e_down = std::exp(r_down.lambda * t);
  const double e_diff = e_down * std::expm1(-2.0 * r_up.gamma * (r_up.eta - r_down.eta) * t);
  const double diff = (pe_up - pe_down) * (1.0 - e_down) + (probe.p() - pe_up) * e_diff;
  return diff / (2.0 * h);
}

RatioMaximum maximize_ratio(const ProbeSpec& probe, const BathSpec& bath,
                            const RatioSearchOptions& options) {
  if (options.grid_points < 2 || !(options.horizon > 0.0) ||
      !(options.tolerance > 0.0)) {
    fail(ErrorKind::parameter,
         "ratio search needs >= 2 grid points, horizon > 0 and tolerance > 0");
  }
  const Frame f = frame_for(probe, bath);
  const double time_unit = 1.0 / std::abs(f.rates.lambda);
  const auto r_at_scaled = [&](double s) {
    const double t = s * time_unit;
    return ratio(derivative_factor(f, t), variance_factor(f, t));
  };

  const std::size_t n = options.grid_points;
  const double spacing = options.horizon / static_cast<double>(n - 1);
  std::size_t best_index = 0;
  double best_value = r_at_scaled(0.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double value = r_at_scaled(spacing * static_cast<double>(k));
    if (value > best_value) {
      best_value = value;
      best_index = k;
    }
  }

  const double lo = spacing * static_cast<double>(best_index == 0 ? 0 : best_index - 1);
  const double hi =
      spacing * static_cast<double>(std::min(best_index + 1, n - 1));
  detail::ScalarMaximum best =
      detail::golden_section_maximize(r_at_scaled, lo, hi, options.tolerance);
  if (best_value > best.value) best = {spacing * best_index, best_value};

  if (const auto t_c = critical_time(probe, bath)) {
    const double s_c = *t_c / time_unit;
    const double value = r_at_scaled(s_c);
    if (value > best.value) best = {s_c, value};
  }
  return {best.value, best.x * time_unit};
}

}  // namespace thermoq

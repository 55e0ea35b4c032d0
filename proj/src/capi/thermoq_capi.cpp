#include "thermoq/thermoq.h"

#include <iterator>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "thermoq/error.hpp"
#include "thermoq/experiments.hpp"
#include "thermoq/markovian.hpp"
#include "thermoq/nonmarkovian.hpp"
#include "thermoq/qfi.hpp"

struct thermoq_table {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
};

struct thermoq_scan {
  std::vector<thermoq_scan_point> points;
  std::size_t violations = 0;
};

struct thermoq_fig2 {
  std::vector<thermoq_fig2_entry> entries;
  std::vector<thermoq_table> tables;
  std::vector<thermoq_fig2_beta_summary> per_beta;
};

namespace {

thread_local std::string last_error;

thermoq_status status_for(thermoq::ErrorKind kind) {
  switch (kind) {
    case thermoq::ErrorKind::parameter:
      return THERMOQ_ERR_PARAMETER;
    case thermoq::ErrorKind::divergence:
      return THERMOQ_ERR_DIVERGENCE;
    case thermoq::ErrorKind::degenerate_state:
      return THERMOQ_ERR_DEGENERATE_STATE;
    case thermoq::ErrorKind::regime:
      return THERMOQ_ERR_REGIME;
    case thermoq::ErrorKind::internal_consistency:
      return THERMOQ_ERR_INTERNAL_CONSISTENCY;
  }
  return THERMOQ_ERR_UNKNOWN;
}

thermoq_status record(thermoq_status status, const char* message) {
  try {
    last_error = message;
  } catch (...) {
    last_error.clear();
  }
  return status;
}

template <class F>
thermoq_status guarded(F&& body) noexcept {
  try {
    body();
    return THERMOQ_OK;
  } catch (const thermoq::Error& e) {
    return record(status_for(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return record(THERMOQ_ERR_UNKNOWN, "out of memory");
  } catch (const std::exception& e) {
    return record(THERMOQ_ERR_UNKNOWN, e.what());
  } catch (...) {
    return record(THERMOQ_ERR_UNKNOWN, "unknown error");
  }
}

template <class... Ptrs>
bool any_null(const Ptrs*... ptrs) {
  return ((ptrs == nullptr) || ...);
}

thermoq_status null_argument() {
  return record(THERMOQ_ERR_NULL_ARGUMENT, "required pointer argument is NULL");
}

thermoq::ProbeSpec to_probe(const thermoq_probe& p) { return {p.omega, p.p}; }
thermoq::BathSpec to_bath(const thermoq_bath& b) { return {b.beta, b.kappa}; }

thermoq::NonMarkovParams to_params(const thermoq_nonmarkov_params& p) {
  return {to_probe(p.probe), to_bath(p.bath), p.coupling};
}

thermoq_probe_class to_c(thermoq::ProbeClass c) {
  switch (c) {
    case thermoq::ProbeClass::cold:
      return THERMOQ_COLD;
    case thermoq::ProbeClass::hot:
      return THERMOQ_HOT;
    case thermoq::ProbeClass::thermal:
      return THERMOQ_THERMAL;
  }
  return THERMOQ_THERMAL;
}

template <class T>
std::vector<T> copy_array(const T* data, std::size_t count) {
  if (count > 0 && data == nullptr) {
    thermoq::fail(thermoq::ErrorKind::parameter, "array pointer is NULL but count > 0");
  }
  return count == 0 ? std::vector<T>{} : std::vector<T>(data, data + count);
}

const double kDefaultBetas[] = {0.1, 0.2, 0.5, 1.0, 2.0};
const double kDefaultOmegas[] = {0.5, 1.0, 2.0};
const thermoq_population kDefaultPopulations[] = {{0, 0.0},  {0, 0.05}, {0, 0.15},
                                                  {1, -0.02}, {1, 0.0}, {1, 0.02},
                                                  {0, 0.35}, {0, 0.5}};
const double kFig2Betas[] = {0.2, 0.5};
const double kFig2Populations[] = {0.0, 0.5};

}  // namespace

extern "C" {

const char* thermoq_version(void) { return "1.0.0"; }

const char* thermoq_status_name(thermoq_status status) {
  switch (status) {
    case THERMOQ_OK:
      return "ok";
    case THERMOQ_ERR_PARAMETER:
      return "parameter error";
    case THERMOQ_ERR_DIVERGENCE:
      return "divergence";
    case THERMOQ_ERR_DEGENERATE_STATE:
      return "degenerate state";
    case THERMOQ_ERR_REGIME:
      return "regime error";
    case THERMOQ_ERR_INTERNAL_CONSISTENCY:
      return "internal consistency error";
    case THERMOQ_ERR_NULL_ARGUMENT:
      return "null argument";
    case THERMOQ_ERR_OUT_OF_RANGE:
      return "index out of range";
    case THERMOQ_ERR_UNKNOWN:
      break;
  }
  return "unknown error";
}

const char* thermoq_last_error(void) { return last_error.c_str(); }

thermoq_status thermoq_validate(const thermoq_probe* probe, const thermoq_bath* bath) {
  if (any_null(probe, bath)) return null_argument();
  return guarded([&] {
    (void)to_probe(*probe);
    (void)to_bath(*bath);
  });
}

thermoq_status thermoq_thermal_excited_population(double omega, double beta, double* out) {
  if (any_null(out)) return null_argument();
  return guarded([&] { *out = thermoq::thermal_excited_population(omega, beta); });
}

thermoq_status thermoq_bose_einstein(double omega01, double beta, double* out) {
  if (any_null(out)) return null_argument();
  return guarded([&] { *out = thermoq::bose_einstein(omega01, beta); });
}

thermoq_status thermoq_compute_rates(const thermoq_probe* probe, const thermoq_bath* bath,
                                     thermoq_rates* out) {
  if (any_null(probe, bath, out)) return null_argument();
  return guarded([&] {
    const thermoq::RateSet r = thermoq::rates(to_probe(*probe), to_bath(*bath));
    *out = {r.eta, r.gamma, r.gamma_down, r.gamma_up, r.lambda, r.gamma_T};
  });
}

thermoq_status thermoq_weak_coupling(const thermoq_probe* probe, const thermoq_bath* bath,
                                     int* passed, double* figure) {
  if (any_null(probe, bath, passed, figure)) return null_argument();
  return guarded([&] {
    const auto report = thermoq::validate_weak_coupling(to_probe(*probe), to_bath(*bath));
    *passed = report.status == thermoq::CouplingStatus::pass ? 1 : 0;
    *figure = report.figure;
  });
}

thermoq_status thermoq_markov_population(const thermoq_probe* probe, const thermoq_bath* bath,
                                         double t, double* q1) {
  if (any_null(probe, bath, q1)) return null_argument();
  return guarded(
      [&] { *q1 = thermoq::evolve_closed_form(to_probe(*probe), to_bath(*bath), t).q1(); });
}

thermoq_status thermoq_theorem_at(const thermoq_probe* probe, const thermoq_bath* bath,
                                  double t, thermoq_theorem_quantities* out) {
  if (any_null(probe, bath, out)) return null_argument();
  return guarded([&] {
    const auto q = thermoq::theorem_quantities(to_probe(*probe), to_bath(*bath), t);
    *out = {q.derivative_factor, q.variance_factor, q.variance_quadratic, q.variance_linear,
            q.stationary_rate,   q.ratio,           to_c(q.classification)};
  });
}

thermoq_status thermoq_critical_time(const thermoq_probe* probe, const thermoq_bath* bath,
                                     int* exists, double* t_c) {
  if (any_null(probe, bath, exists, t_c)) return null_argument();
  return guarded([&] {
    const auto value = thermoq::critical_time(to_probe(*probe), to_bath(*bath));
    *exists = value.has_value() ? 1 : 0;
    if (value) *t_c = *value;
  });
}

thermoq_status thermoq_qfi_diagonal(double q1, double dq1_dbeta, double* out) {
  if (any_null(out)) return null_argument();
  return guarded([&] { *out = thermoq::qfi_diagonal(q1, dq1_dbeta); });
}

thermoq_status thermoq_thermal_qfi(double omega, double beta, double* out) {
  if (any_null(out)) return null_argument();
  return guarded([&] { *out = thermoq::thermal_qfi(omega, beta); });
}

thermoq_status thermoq_markov_default_horizon(const thermoq_probe* probe,
                                              const thermoq_bath* bath, double* out) {
  if (any_null(probe, bath, out)) return null_argument();
  return guarded(
      [&] { *out = thermoq::default_markov_horizon(to_probe(*probe), to_bath(*bath)); });
}

size_t thermoq_table_rows(const thermoq_table* table) {
  return table == nullptr || table->columns.empty() ? 0 : table->columns.front().size();
}

size_t thermoq_table_columns(const thermoq_table* table) {
  return table == nullptr ? 0 : table->columns.size();
}

const char* thermoq_table_column_name(const thermoq_table* table, size_t column) {
  if (table == nullptr || column >= table->names.size()) return nullptr;
  return table->names[column].c_str();
}

const double* thermoq_table_column(const thermoq_table* table, size_t column) {
  if (table == nullptr || column >= table->columns.size()) return nullptr;
  return table->columns[column].data();
}

void thermoq_table_free(thermoq_table* table) { delete table; }

thermoq_status thermoq_markov_trace(const thermoq_probe* probe, const thermoq_bath* bath,
                                    double t_max, size_t samples, thermoq_markov_method method,
                                    thermoq_table** out) {
  if (any_null(probe, bath, out)) return null_argument();
  *out = nullptr;
  return guarded([&] {
    const thermoq::ProbeSpec p = to_probe(*probe);
    const thermoq::BathSpec b = to_bath(*bath);
    if (method != THERMOQ_MARKOV_CLOSED_FORM && method != THERMOQ_MARKOV_ODE) {
      thermoq::fail(thermoq::ErrorKind::parameter, "unknown Markov method");
    }
    if (t_max < 0.0) t_max = thermoq::default_markov_horizon(p, b);
    const auto rows = thermoq::markov_trace_run(
        p, b, t_max, samples,
        method == THERMOQ_MARKOV_ODE ? thermoq::MarkovMethod::ode
                                     : thermoq::MarkovMethod::closed_form);
    auto table = std::make_unique<thermoq_table>();
    table->names = {"t", "q1", "dq_dbeta", "qfi", "ratio"};
    table->columns.assign(5, std::vector<double>());
    for (auto& column : table->columns) column.reserve(rows.size());
    for (const auto& row : rows) {
      table->columns[0].push_back(row.t);
      table->columns[1].push_back(row.q1);
      table->columns[2].push_back(row.dq_dbeta);
      table->columns[3].push_back(row.qfi);
      table->columns[4].push_back(row.ratio);
    }
    *out = table.release();
  });
}

thermoq_status thermoq_nonmarkov_underdamped(const thermoq_nonmarkov_params* params,
                                             int* underdamped) {
  if (any_null(params, underdamped)) return null_argument();
  return guarded([&] { *underdamped = to_params(*params).underdamped() ? 1 : 0; });
}

thermoq_status thermoq_nonmarkov_default_horizon(const thermoq_nonmarkov_params* params,
                                                 double* out) {
  if (any_null(params, out)) return null_argument();
  return guarded([&] { *out = thermoq::default_nonmarkov_horizon(to_params(*params)); });
}

thermoq_status thermoq_nonmarkov_trace(const thermoq_nonmarkov_params* params, double t_max,
                                       size_t samples, thermoq_nonmarkov_method method,
                                       double step, thermoq_table** out) {
  if (any_null(params, out)) return null_argument();
  *out = nullptr;
  return guarded([&] {
    const thermoq::NonMarkovParams p = to_params(*params);
    thermoq::NonMarkovMethod m = thermoq::NonMarkovMethod::automatic;
    switch (method) {
      case THERMOQ_NONMARKOV_AUTOMATIC:
        break;
      case THERMOQ_NONMARKOV_ANALYTIC:
        m = thermoq::NonMarkovMethod::analytic;
        break;
      case THERMOQ_NONMARKOV_RK4:
        m = thermoq::NonMarkovMethod::rk4;
        break;
      default:
        thermoq::fail(thermoq::ErrorKind::parameter, "unknown probe + auxiliary method");
    }
    if (t_max < 0.0) t_max = thermoq::default_nonmarkov_horizon(p);
    const auto grid = thermoq::uniform_grid(t_max, samples);
    const auto points = thermoq::nonmarkov_trajectory(p, grid, m, step);
    auto table = std::make_unique<thermoq_table>();
    table->names = {"t", "q1", "qfi"};
    table->columns.assign(3, std::vector<double>());
    for (const auto& point : points) {
      table->columns[0].push_back(point.t);
      table->columns[1].push_back(point.q1);
      table->columns[2].push_back(point.qfi);
    }
    *out = table.release();
  });
}

void thermoq_default_scan_grid(thermoq_scan_grid* grid) {
  if (grid == nullptr) return;
  *grid = {kDefaultBetas,       std::size(kDefaultBetas),
           kDefaultOmegas,      std::size(kDefaultOmegas),
           1e-4,                kDefaultPopulations,
           std::size(kDefaultPopulations), 1};
}

thermoq_status thermoq_theorem_scan(const thermoq_scan_grid* grid, thermoq_scan** out) {
  if (any_null(grid, out)) return null_argument();
  *out = nullptr;
  return guarded([&] {
    thermoq::ScanGrid g;
    g.betas = copy_array(grid->betas, grid->beta_count);
    g.omegas = copy_array(grid->omegas, grid->omega_count);
    g.kappa = grid->kappa;
    for (const auto& pop : copy_array(grid->populations, grid->population_count)) {
      g.populations.push_back(pop.relative
                                  ? thermoq::PopulationChoice::equilibrium_offset(pop.value)
                                  : thermoq::PopulationChoice::absolute(pop.value));
    }
    if (g.size() == 0) thermoq::fail(thermoq::ErrorKind::parameter, "scan grid is empty");
    const thermoq::ScanReport report = thermoq::theorem_scan(g, grid->jobs);

    auto scan = std::make_unique<thermoq_scan>();
    scan->violations = report.violations;
    scan->points.reserve(report.points.size());
    for (const auto& point : report.points) {
      thermoq_scan_point c{};
      c.probe = {point.probe.omega(), point.probe.p()};
      c.bath = {point.bath.beta(), point.bath.kappa()};
      c.classification = to_c(point.classification);
      c.r_max = point.r_max;
      c.t_at_rmax = point.t_at_rmax;
      c.has_t_c = point.t_c.has_value() ? 1 : 0;
      c.t_c = point.t_c.value_or(0.0);
      c.r_at_tc = point.r_at_tc.value_or(0.0);
      c.consistent = point.verdict == thermoq::Verdict::consistent ? 1 : 0;
      scan->points.push_back(c);
    }
    *out = scan.release();
  });
}

size_t thermoq_scan_size(const thermoq_scan* scan) {
  return scan == nullptr ? 0 : scan->points.size();
}

size_t thermoq_scan_violations(const thermoq_scan* scan) {
  return scan == nullptr ? 0 : scan->violations;
}

thermoq_status thermoq_scan_point_at(const thermoq_scan* scan, size_t index,
                                     thermoq_scan_point* out) {
  if (any_null(scan, out)) return null_argument();
  if (index >= scan->points.size()) {
    return record(THERMOQ_ERR_OUT_OF_RANGE, "scan point index out of range");
  }
  *out = scan->points[index];
  return THERMOQ_OK;
}

void thermoq_scan_free(thermoq_scan* scan) { delete scan; }

void thermoq_default_fig2_config(thermoq_fig2_config* config) {
  if (config == nullptr) return;
  const thermoq::Fig2Config d;
  *config = {d.kappa,
             d.coupling,
             d.omega,
             kFig2Betas,
             std::size(kFig2Betas),
             kFig2Populations,
             std::size(kFig2Populations),
             d.horizon,
             d.asymptote_time,
             d.samples,
             d.resolution,
             d.jobs};
}

thermoq_status thermoq_fig2_run(const thermoq_fig2_config* config, thermoq_fig2** out) {
  if (any_null(config, out)) return null_argument();
  *out = nullptr;
  return guarded([&] {
    thermoq::Fig2Config c;
    c.kappa = config->kappa;
    c.coupling = config->coupling;
    c.omega = config->omega;
    c.betas = copy_array(config->betas, config->beta_count);
    c.populations = copy_array(config->populations, config->population_count);
    c.horizon = config->horizon;
    c.asymptote_time = config->asymptote_time;
    c.samples = config->samples;
    c.resolution = config->resolution;
    c.jobs = config->jobs;
    const thermoq::Fig2Report report = thermoq::fig2_run(c);

    auto result = std::make_unique<thermoq_fig2>();
    for (const auto& entry : report.entries) {
      result->entries.push_back({entry.beta, entry.p, entry.max_qfi, entry.t_at_max,
                                 entry.asymptotic_qfi, entry.local_maxima});
      result->tables.push_back({{"t", "q1", "qfi"}, {entry.times, entry.q1, entry.qfi}});
    }
    for (const auto& s : report.per_beta) {
      result->per_beta.push_back({s.beta, s.gamma_T, s.t_max, s.predicted_max, s.max_gap});
    }
    *out = result.release();
  });
}

size_t thermoq_fig2_entry_count(const thermoq_fig2* report) {
  return report == nullptr ? 0 : report->entries.size();
}

thermoq_status thermoq_fig2_entry_at(const thermoq_fig2* report, size_t index,
                                     thermoq_fig2_entry* out) {
  if (any_null(report, out)) return null_argument();
  if (index >= report->entries.size()) {
    return record(THERMOQ_ERR_OUT_OF_RANGE, "fig2 entry index out of range");
  }
  *out = report->entries[index];
  return THERMOQ_OK;
}

const thermoq_table* thermoq_fig2_entry_table(const thermoq_fig2* report, size_t index) {
  if (report == nullptr || index >= report->tables.size()) return nullptr;
  return &report->tables[index];
}

size_t thermoq_fig2_beta_count(const thermoq_fig2* report) {
  return report == nullptr ? 0 : report->per_beta.size();
}

thermoq_status thermoq_fig2_beta_at(const thermoq_fig2* report, size_t index,
                                    thermoq_fig2_beta_summary* out) {
  if (any_null(report, out)) return null_argument();
  if (index >= report->per_beta.size()) {
    return record(THERMOQ_ERR_OUT_OF_RANGE, "fig2 beta index out of range");
  }
  *out = report->per_beta[index];
  return THERMOQ_OK;
}

void thermoq_fig2_free(thermoq_fig2* report) { delete report; }

}  // extern "C"

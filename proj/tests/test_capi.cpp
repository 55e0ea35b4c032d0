#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <thread>

#include "oracles/oracle_values.hpp"
#include "thermoq/thermoq.h"

namespace {

bool contains(const char* haystack, const char* needle) {
  return std::strstr(haystack, needle) != nullptr;
}

const thermoq_probe kCold{1.0, 0.0};
const thermoq_bath kBath{0.5, 1e-4};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(thermoq_version()) == "1.0.0");
  CHECK(std::string(thermoq_status_name(THERMOQ_OK)) == "ok");
  CHECK(std::string(thermoq_status_name(THERMOQ_ERR_REGIME)) == "regime error");
  CHECK(std::string(thermoq_status_name(static_cast<thermoq_status>(1234))) == "unknown error");
}

TEST_CASE("validation errors carry the violated invariant") {
  const thermoq_probe bad{1.0, 0.6};
  CHECK(thermoq_validate(&bad, &kBath) == THERMOQ_ERR_PARAMETER);
  CHECK(contains(thermoq_last_error(), "p ∈ [0, 1/2]"));
  const thermoq_bath hot_bath{0.0, 1e-4};
  CHECK(thermoq_validate(&kCold, &hot_bath) == THERMOQ_ERR_PARAMETER);
  CHECK(contains(thermoq_last_error(), "beta"));
  CHECK(thermoq_validate(&kCold, &kBath) == THERMOQ_OK);
  CHECK(thermoq_validate(nullptr, &kBath) == THERMOQ_ERR_NULL_ARGUMENT);
  double out = 0.0;
  CHECK(thermoq_bose_einstein(2.0, 0.0, &out) == THERMOQ_ERR_DIVERGENCE);
  CHECK(thermoq_qfi_diagonal(0.0, 1.0, &out) == THERMOQ_ERR_DEGENERATE_STATE);
}

TEST_CASE("last error is per thread") {
  const thermoq_probe bad{1.0, 0.6};
  REQUIRE(thermoq_validate(&bad, &kBath) == THERMOQ_ERR_PARAMETER);
  std::string other;
  std::thread([&] { other = thermoq_last_error(); }).join();
  CHECK(other.empty());
  CHECK(contains(thermoq_last_error(), "p ∈"));
}

TEST_CASE("scalar functions") {
  double value = 0.0;
  REQUIRE(thermoq_thermal_excited_population(1.0, 0.5, &value) == THERMOQ_OK);
  CHECK(std::abs(value - oracle::kEquilibrium) <= 1e-15);
  REQUIRE(thermoq_thermal_qfi(1.0, 0.2, &value) == THERMOQ_OK);
  CHECK(std::abs(value - oracle::kThermalQfiBeta02) <= 1e-15);
  REQUIRE(thermoq_markov_population(&kCold, &kBath, 4295.7, &value) == THERMOQ_OK);
  CHECK(std::abs(value - oracle::kQ1At4295_7) <= 1e-14);
  REQUIRE(thermoq_markov_default_horizon(&kCold, &kBath, &value) == THERMOQ_OK);
  CHECK(std::abs(value - 8.0 / std::abs(oracle::kLambda)) <= 1e-9);

  thermoq_rates r{};
  REQUIRE(thermoq_compute_rates(&kCold, &kBath, &r) == THERMOQ_OK);
  CHECK(std::abs(r.lambda / oracle::kLambda - 1.0) <= 1e-14);
  CHECK(std::abs(r.gamma_T / oracle::kGammaT - 1.0) <= 1e-14);

  int passed = 0;
  REQUIRE(thermoq_weak_coupling(&kCold, &kBath, &passed, &value) == THERMOQ_OK);
  CHECK(passed == 1);
  const thermoq_bath strong{0.5, 0.1};
  REQUIRE(thermoq_weak_coupling(&kCold, &strong, &passed, &value) == THERMOQ_OK);
  CHECK(passed == 0);

  int exists = 0;
  REQUIRE(thermoq_critical_time(&kCold, &kBath, &exists, &value) == THERMOQ_OK);
  CHECK(exists == 1);
  CHECK(std::abs(value / oracle::kCriticalTime - 1.0) <= 1e-12);
  const thermoq_probe hot{1.0, 0.5};
  REQUIRE(thermoq_critical_time(&hot, &kBath, &exists, &value) == THERMOQ_OK);
  CHECK(exists == 0);

  thermoq_theorem_quantities q{};
  REQUIRE(thermoq_theorem_at(&kCold, &kBath, oracle::kCriticalTime, &q) == THERMOQ_OK);
  CHECK(q.classification == THERMOQ_COLD);
  CHECK(std::abs(q.ratio / oracle::kRatioAtTc - 1.0) <= 1e-12);
}

TEST_CASE("markov trace table") {
  thermoq_table* table = nullptr;
  REQUIRE(thermoq_markov_trace(&kCold, &kBath, -1.0, 400, THERMOQ_MARKOV_CLOSED_FORM, &table) ==
          THERMOQ_OK);
  REQUIRE(table != nullptr);
  CHECK(thermoq_table_rows(table) == 400);
  REQUIRE(thermoq_table_columns(table) == 5);
  const char* names[] = {"t", "q1", "dq_dbeta", "qfi", "ratio"};
  for (std::size_t c = 0; c < 5; ++c) CHECK(std::string(thermoq_table_column_name(table, c)) == names[c]);
  CHECK(thermoq_table_column_name(table, 5) == nullptr);
  CHECK(thermoq_table_column(table, 9) == nullptr);
  const double* t = thermoq_table_column(table, 0);
  const double* ratio = thermoq_table_column(table, 4);
  CHECK(t[0] == 0.0);
  CHECK(std::abs(t[399] - 8.0 / std::abs(oracle::kLambda)) <= 1e-9);
  double best = 0.0;
  for (std::size_t i = 0; i < 400; ++i) best = std::max(best, ratio[i]);
  CHECK(best > 1.0);
  thermoq_table_free(table);
  thermoq_table_free(nullptr);

  table = nullptr;
  CHECK(thermoq_markov_trace(&kCold, &kBath, 0.0, 3, THERMOQ_MARKOV_ODE, &table) ==
        THERMOQ_ERR_PARAMETER);
  CHECK(table == nullptr);
  CHECK(thermoq_markov_trace(&kCold, &kBath, 1.0, 3, static_cast<thermoq_markov_method>(7),
                             &table) == THERMOQ_ERR_PARAMETER);
}

TEST_CASE("non-markovian trace") {
  thermoq_nonmarkov_params params{{1.0, 0.0}, {0.2, 1e-4}, 10.0};
  int underdamped = 0;
  REQUIRE(thermoq_nonmarkov_underdamped(&params, &underdamped) == THERMOQ_OK);
  CHECK(underdamped == 1);
  double horizon = 0.0;
  REQUIRE(thermoq_nonmarkov_default_horizon(&params, &horizon) == THERMOQ_OK);
  CHECK(std::abs(horizon * oracle::kGammaTBeta02 - 2.0) <= 1e-12);

  thermoq_table* table = nullptr;
  REQUIRE(thermoq_nonmarkov_trace(&params, -1.0, 101, THERMOQ_NONMARKOV_ANALYTIC, 0.0, &table) ==
          THERMOQ_OK);
  CHECK(thermoq_table_rows(table) == 101);
  CHECK(thermoq_table_columns(table) == 3);
  CHECK(std::string(thermoq_table_column_name(table, 2)) == "qfi");
  thermoq_table_free(table);

  thermoq_table* rk4 = nullptr;
  REQUIRE(thermoq_nonmarkov_trace(&params, 2.0, 3, THERMOQ_NONMARKOV_RK4, 0.0, &rk4) == THERMOQ_OK);
  CHECK(thermoq_table_rows(rk4) == 3);
  thermoq_table_free(rk4);

  params.coupling = 1e-9;
  table = nullptr;
  CHECK(thermoq_nonmarkov_trace(&params, 10.0, 3, THERMOQ_NONMARKOV_ANALYTIC, 0.0, &table) ==
        THERMOQ_ERR_REGIME);
  CHECK(contains(thermoq_last_error(), "use rk4"));
  CHECK(table == nullptr);
  params.coupling = 0.0;
  CHECK(thermoq_nonmarkov_underdamped(&params, &underdamped) == THERMOQ_ERR_PARAMETER);
}

TEST_CASE("theorem scan") {
  thermoq_scan_grid grid{};
  thermoq_default_scan_grid(&grid);
  CHECK(grid.beta_count == 5);
  CHECK(grid.omega_count == 3);
  CHECK(grid.population_count == 8);
  grid.jobs = 2;
  thermoq_scan* scan = nullptr;
  REQUIRE(thermoq_theorem_scan(&grid, &scan) == THERMOQ_OK);
  CHECK(thermoq_scan_size(scan) == 120);
  CHECK(thermoq_scan_violations(scan) == 0);
  thermoq_scan_point pt{};
  REQUIRE(thermoq_scan_point_at(scan, 0, &pt) == THERMOQ_OK);
  CHECK(pt.bath.beta == 0.1);
  CHECK(pt.consistent == 1);
  CHECK(thermoq_scan_point_at(scan, 120, &pt) == THERMOQ_ERR_OUT_OF_RANGE);
  thermoq_scan_free(scan);

  const double betas[] = {0.5};
  const double omegas[] = {1.0};
  const thermoq_population pops[] = {{0, 0.0}};
  thermoq_scan_grid single{betas, 1, omegas, 1, 1e-4, pops, 1, 1};
  REQUIRE(thermoq_theorem_scan(&single, &scan) == THERMOQ_OK);
  REQUIRE(thermoq_scan_point_at(scan, 0, &pt) == THERMOQ_OK);
  CHECK(pt.has_t_c == 1);
  CHECK(std::abs(pt.t_c / oracle::kCriticalTime - 1.0) <= 1e-12);
  CHECK(pt.classification == THERMOQ_COLD);
  thermoq_scan_free(scan);

  const double bad_betas[] = {-1.0};
  thermoq_scan_grid bad{bad_betas, 1, omegas, 1, 1e-4, pops, 1, 1};
  scan = nullptr;
  CHECK(thermoq_theorem_scan(&bad, &scan) == THERMOQ_ERR_PARAMETER);
  CHECK(contains(thermoq_last_error(), "grid point 0"));
  CHECK(scan == nullptr);
  thermoq_scan_grid empty{nullptr, 0, omegas, 1, 1e-4, pops, 1, 1};
  CHECK(thermoq_theorem_scan(&empty, &scan) == THERMOQ_ERR_PARAMETER);
}

TEST_CASE("fig2 report") {
  thermoq_fig2_config config{};
  thermoq_default_fig2_config(&config);
  CHECK(config.kappa == 5e-5);
  CHECK(config.coupling == 10.0);
  CHECK(config.beta_count == 2);
  config.samples = 201;
  thermoq_fig2* report = nullptr;
  REQUIRE(thermoq_fig2_run(&config, &report) == THERMOQ_OK);
  REQUIRE(thermoq_fig2_entry_count(report) == 4);
  thermoq_fig2_entry e{};
  REQUIRE(thermoq_fig2_entry_at(report, 1, &e) == THERMOQ_OK);
  CHECK(e.beta == 0.2);
  CHECK(e.p == 0.5);
  CHECK(e.max_qfi >= e.asymptotic_qfi);
  const thermoq_table* table = thermoq_fig2_entry_table(report, 1);
  REQUIRE(table != nullptr);
  CHECK(thermoq_table_rows(table) == 201);
  CHECK(thermoq_fig2_entry_table(report, 4) == nullptr);
  REQUIRE(thermoq_fig2_beta_count(report) == 2);
  thermoq_fig2_beta_summary b{};
  REQUIRE(thermoq_fig2_beta_at(report, 1, &b) == THERMOQ_OK);
  CHECK(b.beta == 0.5);
  CHECK(std::abs(b.predicted_max - oracle::kThermalQfiBeta05) <= 1e-15);
  CHECK(thermoq_fig2_beta_at(report, 2, &b) == THERMOQ_ERR_OUT_OF_RANGE);
  thermoq_fig2_free(report);
  thermoq_fig2_free(nullptr);

  config.coupling = 1e-9;
  report = nullptr;
  CHECK(thermoq_fig2_run(&config, &report) == THERMOQ_ERR_REGIME);
  CHECK(report == nullptr);
}

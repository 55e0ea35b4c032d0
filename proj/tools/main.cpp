// thermoq command-line front end. Links only the C API.

#include <cstdio>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csv.hpp"
#include "settings.hpp"
#include "thermoq/thermoq.h"

namespace {

using nlohmann::ordered_json;
using thermoq::cli::CsvTable;
using thermoq::cli::IoError;
using thermoq::cli::Settings;
using thermoq::cli::UsageError;

enum ExitCode { kOk = 0, kVerificationFailed = 1, kUsage = 2, kIo = 3 };

class ApiError : public std::runtime_error {
 public:
  ApiError(thermoq_status status, const std::string& message)
      : std::runtime_error(message), status_(status) {}
  thermoq_status status() const { return status_; }

 private:
  thermoq_status status_;
};

void check(thermoq_status status) {
  if (status != THERMOQ_OK) {
    std::string message = thermoq_last_error();
    if (message.empty()) message = thermoq_status_name(status);
    throw ApiError(status, message);
  }
}

struct TableDeleter {
  void operator()(thermoq_table* t) const { thermoq_table_free(t); }
};
struct ScanDeleter {
  void operator()(thermoq_scan* s) const { thermoq_scan_free(s); }
};
struct Fig2Deleter {
  void operator()(thermoq_fig2* f) const { thermoq_fig2_free(f); }
};

CsvTable to_csv_table(const thermoq_table* table) {
  CsvTable out;
  const std::size_t columns = thermoq_table_columns(table);
  const std::size_t rows = thermoq_table_rows(table);
  std::vector<const double*> data;
  for (std::size_t c = 0; c < columns; ++c) {
    out.header.emplace_back(thermoq_table_column_name(table, c));
    data.push_back(thermoq_table_column(table, c));
  }
  out.rows.assign(rows, std::vector<double>(columns));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns; ++c) out.rows[r][c] = data[c][r];
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing " + path);
}

// One subcommand: string-valued flags that land in Settings when given.
class Command {
 public:
  Command(CLI::App& parent, const std::string& name, const std::string& description,
          std::vector<std::string> keys)
      : name_(name), keys_(std::move(keys)) {
    app_ = parent.add_subcommand(name, description);
    app_->add_option("--config", config_, "Flat JSON config; flags override its values");
  }

  CLI::App& app() { return *app_; }

  void flag(const std::string& name, const std::string& key, const std::string& help) {
    Flag& f = flags_.emplace_back();
    f.key = key;
    f.option = app_->add_option(name, f.value, help);
  }

  Settings settings() const {
    Settings settings(name_, keys_);
    if (!config_.empty()) settings.load_file(config_);
    for (const Flag& f : flags_) {
      if (f.option->count() > 0) settings.set(f.key, f.value);
    }
    return settings;
  }

  std::string config_;

 private:
  struct Flag {
    std::string key;
    std::string value;
    CLI::Option* option = nullptr;
  };

  std::string name_;
  std::vector<std::string> keys_;
  CLI::App* app_ = nullptr;
  std::deque<Flag> flags_;
};

void add_physics_flags(Command& cmd) {
  cmd.flag("--beta", "beta", "Bath inverse temperature, > 0");
  cmd.flag("--omega", "omega", "Probe half gap (H = omega sigma_z), > 0");
  cmd.flag("--kappa", "kappa", "Ohmic coupling constant, > 0");
  cmd.flag("--p", "p", "Initial excited population, in [0, 1/2]");
  cmd.flag("--t-max", "t_max", "Final time, or 'auto'");
  cmd.flag("--samples", "samples", "Number of output rows (default 400)");
  cmd.flag("--out", "out", "Output CSV path (default: standard output)");
}

void weak_coupling_check(const thermoq_probe& probe, const thermoq_bath& bath, bool strict) {
  int passed = 0;
  double figure = 0.0;
  check(thermoq_weak_coupling(&probe, &bath, &passed, &figure));
  if (passed) return;
  const std::string message = "weak-coupling figure (Gamma_up + Gamma_down) / omega01 = " +
                              thermoq::cli::format_number(figure) + " exceeds 0.01";
  if (strict) throw UsageError(message);
  std::cerr << "warning: " << message << "\n";
}

std::size_t checked_samples(const Settings& s) {
  const std::size_t samples = s.count_or("samples", 400);
  if (samples == 0) throw UsageError("parameter 'samples' must be >= 1");
  return samples;
}

int run_markov(const Settings& s, bool strict) {
  const thermoq_probe probe{s.number("omega"), s.number("p")};
  const thermoq_bath bath{s.number("beta"), s.number("kappa")};
  check(thermoq_validate(&probe, &bath));
  weak_coupling_check(probe, bath, strict);

  const std::string method_name = s.text_or("method", "closed");
  thermoq_markov_method method = THERMOQ_MARKOV_CLOSED_FORM;
  if (method_name == "ode") {
    method = THERMOQ_MARKOV_ODE;
  } else if (method_name != "closed") {
    throw UsageError("method must be 'closed' or 'ode' (got '" + method_name + "')");
  }
  const double t_max = s.horizon("t_max").value_or(-1.0);

  thermoq_table* raw = nullptr;
  check(thermoq_markov_trace(&probe, &bath, t_max, checked_samples(s), method, &raw));
  std::unique_ptr<thermoq_table, TableDeleter> table(raw);
  write_text(s.text_or("out", ""), thermoq::cli::to_csv(to_csv_table(table.get())));
  return kOk;
}

int run_nonmarkov(const Settings& s, bool strict) {
  thermoq_nonmarkov_params params{};
  params.probe = {s.number("omega"), s.number("p")};
  params.bath = {s.number("beta"), s.number("kappa")};
  params.coupling = s.number("coupling");
  check(thermoq_validate(&params.probe, &params.bath));
  weak_coupling_check(params.probe, params.bath, strict);

  const std::string method_name = s.text_or("method", "analytic");
  thermoq_nonmarkov_method method = THERMOQ_NONMARKOV_ANALYTIC;
  if (method_name == "rk4") {
    method = THERMOQ_NONMARKOV_RK4;
  } else if (method_name != "analytic") {
    throw UsageError("method must be 'analytic' or 'rk4' (got '" + method_name + "')");
  }
  const double step = s.number_or("step", 0.0);
  if (!(step >= 0.0)) throw UsageError("parameter 'step' must be >= 0 (0 selects the default)");
  const double t_max = s.horizon("t_max").value_or(-1.0);

  thermoq_table* raw = nullptr;
  check(thermoq_nonmarkov_trace(&params, t_max, checked_samples(s), method, step, &raw));
  std::unique_ptr<thermoq_table, TableDeleter> table(raw);
  write_text(s.text_or("out", ""), thermoq::cli::to_csv(to_csv_table(table.get())));
  return kOk;
}

const char* class_name(thermoq_probe_class c) {
  switch (c) {
    case THERMOQ_COLD:
      return "cold";
    case THERMOQ_HOT:
      return "hot";
    case THERMOQ_THERMAL:
      break;
  }
  return "thermal";
}

ordered_json optional_number(int present, double value) {
  return present ? ordered_json(value) : ordered_json(nullptr);
}

int run_theorem_scan(const Settings& s, bool use_defaults) {
  thermoq_scan_grid defaults{};
  thermoq_default_scan_grid(&defaults);

  auto pick = [&](const char* key) {
    if (!use_defaults && !s.has(key)) {
      throw UsageError(std::string("missing required parameter '") + key +
                       "' (pass --default to use the built-in grid)");
    }
    return s.has(key);
  };
  std::vector<double> betas = pick("betas") ? s.numbers("betas")
                                            : std::vector<double>(defaults.betas,
                                                                  defaults.betas +
                                                                      defaults.beta_count);
  std::vector<double> omegas = pick("omegas") ? s.numbers("omegas")
                                              : std::vector<double>(defaults.omegas,
                                                                    defaults.omegas +
                                                                        defaults.omega_count);
  std::vector<thermoq_population> populations =
      pick("populations") ? s.populations("populations")
                          : std::vector<thermoq_population>(
                                defaults.populations,
                                defaults.populations + defaults.population_count);
  const double kappa = pick("kappa") ? s.number("kappa") : defaults.kappa;

  thermoq_scan_grid grid{betas.data(),       betas.size(), omegas.data(), omegas.size(), kappa,
                         populations.data(), populations.size(),
                         thermoq::cli::resolve_jobs(s, std::getenv("THERMOQ_JOBS"))};
  thermoq_scan* raw = nullptr;
  check(thermoq_theorem_scan(&grid, &raw));
  std::unique_ptr<thermoq_scan, ScanDeleter> scan(raw);

  ordered_json points = ordered_json::array();
  const std::size_t n = thermoq_scan_size(scan.get());
  for (std::size_t i = 0; i < n; ++i) {
    thermoq_scan_point pt{};
    check(thermoq_scan_point_at(scan.get(), i, &pt));
    ordered_json j;
    j["probe"] = {{"omega", pt.probe.omega}, {"p", pt.probe.p}};
    j["bath"] = {{"beta", pt.bath.beta}, {"kappa", pt.bath.kappa}};
    j["classification"] = class_name(pt.classification);
    j["r_max"] = pt.r_max;
    j["t_at_rmax"] = pt.t_at_rmax;
    j["t_c"] = optional_number(pt.has_t_c, pt.t_c);
    j["r_at_tc"] = optional_number(pt.has_t_c, pt.r_at_tc);
    j["verdict"] = pt.consistent ? "consistent" : "violation";
    if (!pt.consistent) {
      std::cerr << "violation at grid point " << i << ": " << j.dump() << "\n";
    }
    points.push_back(std::move(j));
  }
  const std::size_t violations = thermoq_scan_violations(scan.get());
  ordered_json report;
  report["points"] = std::move(points);
  report["summary"] = {{"points", n}, {"violations", violations}};

  const std::string out = s.text_or("out", "");
  write_text(out, report.dump(2) + "\n");
  if (!out.empty() && out != "-") {
    std::cout << "theorem scan: " << n << " points, " << violations << " violations\n";
  }
  return violations == 0 ? kOk : kVerificationFailed;
}

int run_fig2(const Settings& s) {
  thermoq_fig2_config config{};
  thermoq_default_fig2_config(&config);
  std::vector<double> betas(config.betas, config.betas + config.beta_count);
  std::vector<double> populations(config.populations,
                                  config.populations + config.population_count);
  if (s.has("betas")) betas = s.numbers("betas");
  if (s.has("populations")) populations = s.numbers("populations");
  config.kappa = s.number_or("kappa", config.kappa);
  config.coupling = s.number_or("coupling", config.coupling);
  config.omega = s.number_or("omega", config.omega);
  config.horizon = s.number_or("horizon", config.horizon);
  config.asymptote_time = s.number_or("asymptote_time", config.asymptote_time);
  config.samples = s.count_or("samples", config.samples);
  config.resolution = s.count_or("resolution", config.resolution);
  config.betas = betas.data();
  config.beta_count = betas.size();
  config.populations = populations.data();
  config.population_count = populations.size();
  config.jobs = thermoq::cli::resolve_jobs(s, std::getenv("THERMOQ_JOBS"));

  thermoq_fig2* raw = nullptr;
  check(thermoq_fig2_run(&config, &raw));
  std::unique_ptr<thermoq_fig2, Fig2Deleter> report(raw);

  const std::filesystem::path dir = s.text_or("out_dir", ".");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

  using thermoq::cli::format_number;
  ordered_json entries = ordered_json::array();
  std::size_t below_asymptote = 0;
  const std::size_t n = thermoq_fig2_entry_count(report.get());
  for (std::size_t i = 0; i < n; ++i) {
    thermoq_fig2_entry e{};
    check(thermoq_fig2_entry_at(report.get(), i, &e));
    const std::string file = "fig2_beta" + format_number(e.beta) + "_p" + format_number(e.p) + ".csv";
    write_text((dir / file).string(),
               thermoq::cli::to_csv(to_csv_table(thermoq_fig2_entry_table(report.get(), i))));
    const bool exceeds = e.max_qfi >= e.asymptotic_qfi;
    if (!exceeds) ++below_asymptote;
    entries.push_back({{"beta", e.beta},
                       {"p", e.p},
                       {"file", file},
                       {"max_qfi", e.max_qfi},
                       {"t_at_max", e.t_at_max},
                       {"asymptotic_qfi", e.asymptotic_qfi},
                       {"max_exceeds_asymptote", exceeds},
                       {"local_maxima", e.local_maxima}});
  }
  ordered_json per_beta = ordered_json::array();
  for (std::size_t i = 0; i < thermoq_fig2_beta_count(report.get()); ++i) {
    thermoq_fig2_beta_summary b{};
    check(thermoq_fig2_beta_at(report.get(), i, &b));
    per_beta.push_back({{"beta", b.beta},
                        {"gamma_T", b.gamma_T},
                        {"t_max", b.t_max},
                        {"predicted_max", b.predicted_max},
                        {"max_gap", b.max_gap}});
  }

  ordered_json summary;
  summary["config"] = {{"kappa", config.kappa},
                       {"coupling", config.coupling},
                       {"omega", config.omega},
                       {"betas", betas},
                       {"populations", populations},
                       {"horizon", config.horizon},
                       {"asymptote_time", config.asymptote_time},
                       {"samples", config.samples},
                       {"resolution", config.resolution}};
  summary["entries"] = std::move(entries);
  summary["per_beta"] = std::move(per_beta);
  summary["summary"] = {{"entries", n}, {"max_below_asymptote", below_asymptote}};
  write_text((dir / "fig2_summary.json").string(), summary.dump(2) + "\n");
  std::cout << "fig2: wrote " << n << " trajectories and fig2_summary.json to " << dir.string()
            << "\n";
  return below_asymptote == 0 ? kOk : kVerificationFailed;
}

int exit_code_for(thermoq_status status) {
  switch (status) {
    case THERMOQ_ERR_PARAMETER:
    case THERMOQ_ERR_DIVERGENCE:
    case THERMOQ_ERR_DEGENERATE_STATE:
    case THERMOQ_ERR_REGIME:
    case THERMOQ_ERR_NULL_ARGUMENT:
    case THERMOQ_ERR_OUT_OF_RANGE:
      return kUsage;
    default:
      return kVerificationFailed;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transient qubit thermometry: QFI trajectories and enhancement checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", thermoq_version());
  bool strict = false;

  Command markov(app, "markov", "Markovian probe trajectory with QFI and ratio to thermal",
                 {"beta", "omega", "kappa", "p", "t_max", "samples", "out", "method"});
  add_physics_flags(markov);
  markov.flag("--method", "method", "closed (default) or ode");
  markov.app().add_flag("--strict", strict, "Fail if the weak-coupling check does not pass");

  Command nonmarkov(app, "nonmarkov", "Probe coupled to an auxiliary qubit",
                    {"beta", "omega", "kappa", "p", "t_max", "samples", "out", "method",
                     "coupling", "step"});
  add_physics_flags(nonmarkov);
  nonmarkov.flag("--coupling", "coupling", "Probe-auxiliary exchange coupling J, > 0");
  nonmarkov.flag("--method", "method", "analytic (default) or rk4");
  nonmarkov.flag("--step", "step", "RK4 step (default: 1/400 of an exchange period)");
  nonmarkov.app().add_flag("--strict", strict, "Fail if the weak-coupling check does not pass");

  Command scan(app, "theorem-scan", "Check the hot/cold enhancement criterion over a grid",
               {"betas", "omegas", "kappa", "populations", "jobs", "out"});
  bool use_defaults = false;
  std::string scan_config;
  scan.app().add_option("config_file", scan_config, "Flat JSON config (same as --config)");
  scan.app().add_flag("--default", use_defaults, "Fill missing grid keys with the built-in grid");
  scan.flag("--betas", "betas", "Comma-separated inverse temperatures");
  scan.flag("--omegas", "omegas", "Comma-separated probe half gaps");
  scan.flag("--kappa", "kappa", "Ohmic coupling constant");
  scan.flag("--populations", "populations", "Comma-separated p values; pe, pe+x, pe-x allowed");
  scan.flag("--jobs", "jobs", "Worker threads (fallback THERMOQ_JOBS, then all cores)");
  scan.flag("--out", "out", "Report path (default: standard output)");

  Command fig2(app, "fig2", "Cold vs hot probe QFI with an auxiliary qubit",
               {"kappa", "coupling", "omega", "betas", "populations", "horizon",
                "asymptote_time", "samples", "resolution", "jobs", "out_dir"});
  fig2.flag("--kappa", "kappa", "Ohmic coupling constant (default 5e-5, gamma = 1e-4)");
  fig2.flag("--coupling", "coupling", "Exchange coupling J (default 10)");
  fig2.flag("--omega", "omega", "Probe and auxiliary half gap (default 1)");
  fig2.flag("--betas", "betas", "Comma-separated inverse temperatures (default 0.2,0.5)");
  fig2.flag("--populations", "populations", "Comma-separated p values (default 0,0.5)");
  fig2.flag("--horizon", "horizon", "Trajectory length in units of 1/Gamma_T (default 4)");
  fig2.flag("--asymptote-time", "asymptote_time",
            "Asymptotic QFI time in units of 1/Gamma_T (default 20)");
  fig2.flag("--samples", "samples", "Rows per trajectory (default 4001)");
  fig2.flag("--resolution", "resolution", "Search points per half oscillation (default 16)");
  fig2.flag("--jobs", "jobs", "Worker threads (fallback THERMOQ_JOBS, then all cores)");
  fig2.flag("--out-dir", "out_dir", "Output directory (default .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (markov.app().parsed()) return run_markov(markov.settings(), strict);
    if (nonmarkov.app().parsed()) return run_nonmarkov(nonmarkov.settings(), strict);
    if (scan.app().parsed()) {
      if (!scan_config.empty()) {
        if (!scan.config_.empty()) throw UsageError("give the config either positionally or via --config");
        scan.config_ = scan_config;
      }
      return run_theorem_scan(scan.settings(), use_defaults);
    }
    if (fig2.app().parsed()) return run_fig2(fig2.settings());
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.status());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerificationFailed;
  }
  return kUsage;
}

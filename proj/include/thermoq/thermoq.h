/* C interface to the thermoq transient-thermometry library.
 *
 * Every fallible call returns a thermoq_status. On failure the calling
 * thread's thermoq_last_error() describes what went wrong; it stays valid
 * until the next failing call on the same thread. Objects returned through
 * `**out` parameters are owned by the caller and released with the matching
 * *_free function (which accepts NULL). */
#ifndef THERMOQ_H
#define THERMOQ_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(THERMOQ_BUILDING_LIBRARY)
#    define THERMOQ_API __declspec(dllexport)
#  else
#    define THERMOQ_API __declspec(dllimport)
#  endif
#else
#  define THERMOQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum thermoq_status {
  THERMOQ_OK = 0,
  THERMOQ_ERR_PARAMETER = 1,
  THERMOQ_ERR_DIVERGENCE = 2,
  THERMOQ_ERR_DEGENERATE_STATE = 3,
  THERMOQ_ERR_REGIME = 4,
  THERMOQ_ERR_INTERNAL_CONSISTENCY = 5,
  THERMOQ_ERR_NULL_ARGUMENT = 6,
  THERMOQ_ERR_OUT_OF_RANGE = 7,
  THERMOQ_ERR_UNKNOWN = 99
} thermoq_status;

typedef enum thermoq_probe_class {
  THERMOQ_COLD = 0,
  THERMOQ_HOT = 1,
  THERMOQ_THERMAL = 2
} thermoq_probe_class;

typedef enum thermoq_markov_method {
  THERMOQ_MARKOV_CLOSED_FORM = 0,
  THERMOQ_MARKOV_ODE = 1
} thermoq_markov_method;

typedef enum thermoq_nonmarkov_method {
  THERMOQ_NONMARKOV_AUTOMATIC = 0,
  THERMOQ_NONMARKOV_ANALYTIC = 1,
  THERMOQ_NONMARKOV_RK4 = 2
} thermoq_nonmarkov_method;

typedef struct thermoq_probe {
  double omega; /* half gap of H_S = omega sigma_z, > 0 */
  double p;     /* initial excited population, in [0, 1/2] */
} thermoq_probe;

typedef struct thermoq_bath {
  double beta;  /* inverse temperature, in (0, inf) */
  double kappa; /* Ohmic coupling constant, > 0 */
} thermoq_bath;

typedef struct thermoq_rates {
  double eta;
  double gamma;
  double gamma_down;
  double gamma_up;
  double lambda;
  double gamma_T;
} thermoq_rates;

typedef struct thermoq_theorem_quantities {
  double derivative_factor;
  double variance_factor;
  double variance_quadratic;
  double variance_linear;
  double stationary_rate;
  double ratio;
  thermoq_probe_class classification;
} thermoq_theorem_quantities;

THERMOQ_API const char* thermoq_version(void);
THERMOQ_API const char* thermoq_status_name(thermoq_status status);
THERMOQ_API const char* thermoq_last_error(void);

/* ---- rates and populations --------------------------------------------- */

THERMOQ_API thermoq_status thermoq_validate(const thermoq_probe* probe,
                                            const thermoq_bath* bath);
THERMOQ_API thermoq_status thermoq_thermal_excited_population(double omega, double beta,
                                                              double* out);
THERMOQ_API thermoq_status thermoq_bose_einstein(double omega01, double beta, double* out);
THERMOQ_API thermoq_status thermoq_compute_rates(const thermoq_probe* probe,
                                                 const thermoq_bath* bath,
                                                 thermoq_rates* out);
/* *passed is 1 when (G_up + G_down)/omega01 < 0.01. */
THERMOQ_API thermoq_status thermoq_weak_coupling(const thermoq_probe* probe,
                                                 const thermoq_bath* bath, int* passed,
                                                 double* figure);

/* ---- Markovian dynamics and QFI ---------------------------------------- */

THERMOQ_API thermoq_status thermoq_markov_population(const thermoq_probe* probe,
                                                     const thermoq_bath* bath, double t,
                                                     double* q1);
THERMOQ_API thermoq_status thermoq_theorem_at(const thermoq_probe* probe,
                                              const thermoq_bath* bath, double t,
                                              thermoq_theorem_quantities* out);
/* *exists is 0 (and *t_c untouched) for hot and thermal probes. */
THERMOQ_API thermoq_status thermoq_critical_time(const thermoq_probe* probe,
                                                 const thermoq_bath* bath, int* exists,
                                                 double* t_c);
THERMOQ_API thermoq_status thermoq_qfi_diagonal(double q1, double dq1_dbeta, double* out);
THERMOQ_API thermoq_status thermoq_thermal_qfi(double omega, double beta, double* out);
/* 8/|lambda|. */
THERMOQ_API thermoq_status thermoq_markov_default_horizon(const thermoq_probe* probe,
                                                          const thermoq_bath* bath,
                                                          double* out);

/* ---- tables ------------------------------------------------------------- *
 * Column-oriented numeric results. Markov traces have columns
 * t,q1,dq_dbeta,qfi,ratio; probe + auxiliary traces have t,q1,qfi. */

typedef struct thermoq_table thermoq_table;

THERMOQ_API size_t thermoq_table_rows(const thermoq_table* table);
THERMOQ_API size_t thermoq_table_columns(const thermoq_table* table);
/* NULL when column is out of range. */
THERMOQ_API const char* thermoq_table_column_name(const thermoq_table* table, size_t column);
/* Pointer to rows() contiguous values; NULL when column is out of range. */
THERMOQ_API const double* thermoq_table_column(const thermoq_table* table, size_t column);
THERMOQ_API void thermoq_table_free(thermoq_table* table);

/* t_max < 0 selects the default horizon 8/|lambda|. */
THERMOQ_API thermoq_status thermoq_markov_trace(const thermoq_probe* probe,
                                                const thermoq_bath* bath, double t_max,
                                                size_t samples,
                                                thermoq_markov_method method,
                                                thermoq_table** out);

/* ---- probe + auxiliary ------------------------------------------------- */

typedef struct thermoq_nonmarkov_params {
  thermoq_probe probe;
  thermoq_bath bath;
  double coupling; /* J > 0 */
} thermoq_nonmarkov_params;

THERMOQ_API thermoq_status thermoq_nonmarkov_underdamped(const thermoq_nonmarkov_params* params,
                                                         int* underdamped);
/* 2/gamma_T. */
THERMOQ_API thermoq_status thermoq_nonmarkov_default_horizon(
    const thermoq_nonmarkov_params* params, double* out);
/* t_max < 0 selects 2/gamma_T; step <= 0 selects the default RK4 step. */
THERMOQ_API thermoq_status thermoq_nonmarkov_trace(const thermoq_nonmarkov_params* params,
                                                   double t_max, size_t samples,
                                                   thermoq_nonmarkov_method method,
                                                   double step, thermoq_table** out);

/* ---- Markovian enhancement scan ---------------------------------------- */

typedef struct thermoq_population {
  int relative; /* nonzero: value is an offset from p^e, clamped to [0, 1/2] */
  double value;
} thermoq_population;

typedef struct thermoq_scan_grid {
  const double* betas;
  size_t beta_count;
  const double* omegas;
  size_t omega_count;
  double kappa;
  const thermoq_population* populations;
  size_t population_count;
  unsigned jobs; /* 0 behaves as 1 */
} thermoq_scan_grid;

typedef struct thermoq_scan_point {
  thermoq_probe probe;
  thermoq_bath bath;
  thermoq_probe_class classification;
  double r_max;
  double t_at_rmax;
  int has_t_c;
  double t_c;
  double r_at_tc;
  int consistent; /* 1 consistent, 0 violation */
} thermoq_scan_point;

typedef struct thermoq_scan thermoq_scan;

/* Fills *grid with the built-in default grid (storage owned by the library). */
THERMOQ_API void thermoq_default_scan_grid(thermoq_scan_grid* grid);
THERMOQ_API thermoq_status thermoq_theorem_scan(const thermoq_scan_grid* grid,
                                                thermoq_scan** out);
THERMOQ_API size_t thermoq_scan_size(const thermoq_scan* scan);
THERMOQ_API size_t thermoq_scan_violations(const thermoq_scan* scan);
THERMOQ_API thermoq_status thermoq_scan_point_at(const thermoq_scan* scan, size_t index,
                                                 thermoq_scan_point* out);
THERMOQ_API void thermoq_scan_free(thermoq_scan* scan);

/* ---- probe + auxiliary hot/cold comparison ----------------------------- */

typedef struct thermoq_fig2_config {
  double kappa;
  double coupling;
  double omega;
  const double* betas;
  size_t beta_count;
  const double* populations;
  size_t population_count;
  double horizon;         /* t_max = horizon / gamma_T */
  double asymptote_time;  /* asymptotic QFI at asymptote_time / gamma_T */
  size_t samples;
  size_t resolution;
  unsigned jobs;
} thermoq_fig2_config;

typedef struct thermoq_fig2_entry {
  double beta;
  double p;
  double max_qfi;
  double t_at_max;
  double asymptotic_qfi;
  size_t local_maxima;
} thermoq_fig2_entry;

typedef struct thermoq_fig2_beta_summary {
  double beta;
  double gamma_T;
  double t_max;
  double predicted_max;
  double max_gap;
} thermoq_fig2_beta_summary;

typedef struct thermoq_fig2 thermoq_fig2;

/* Fills *config with the defaults (storage owned by the library). */
THERMOQ_API void thermoq_default_fig2_config(thermoq_fig2_config* config);
THERMOQ_API thermoq_status thermoq_fig2_run(const thermoq_fig2_config* config,
                                            thermoq_fig2** out);
THERMOQ_API size_t thermoq_fig2_entry_count(const thermoq_fig2* report);
THERMOQ_API thermoq_status thermoq_fig2_entry_at(const thermoq_fig2* report, size_t index,
                                                 thermoq_fig2_entry* out);
/* Borrowed t,q1,qfi table of an entry; valid until the report is freed. */
THERMOQ_API const thermoq_table* thermoq_fig2_entry_table(const thermoq_fig2* report,
                                                          size_t index);
THERMOQ_API size_t thermoq_fig2_beta_count(const thermoq_fig2* report);
THERMOQ_API thermoq_status thermoq_fig2_beta_at(const thermoq_fig2* report, size_t index,
                                                thermoq_fig2_beta_summary* out);
THERMOQ_API void thermoq_fig2_free(thermoq_fig2* report);

#ifdef __cplusplus
}
#endif

#endif /* THERMOQ_H */

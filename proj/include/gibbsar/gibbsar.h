/*
 * gibbsar C API.
 *
 * Every function returns a gibbsar_status. On failure the thread-local
 * message is available from gibbsar_last_error() until the next failing call
 * on the same thread. Objects returned through `**out` parameters are owned
 * by the caller and released with the matching *_free function.
 *
 * Array outputs take (buffer, capacity, length_out). When capacity is too
 * small the call returns GIBBSAR_BUFFER_TOO_SMALL and still stores the
 * required length.
 */
#ifndef GIBBSAR_H
#define GIBBSAR_H

#include <stddef.h>
#include <stdint.h>

#if defined(GIBBSAR_BUILDING_LIBRARY)
#define GIBBSAR_API __attribute__((visibility("default")))
#else
#define GIBBSAR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gibbsar_status {
  GIBBSAR_OK = 0,
  GIBBSAR_INVALID_ARGUMENT = 1,
  GIBBSAR_DOMAIN_ERROR = 2,
  GIBBSAR_NUMERICAL_FAILURE = 3,
  GIBBSAR_IO_ERROR = 4,
  GIBBSAR_BUFFER_TOO_SMALL = 5,
  GIBBSAR_INTERNAL_ERROR = 6
} gibbsar_status;

typedef enum gibbsar_prior_kind {
  GIBBSAR_PRIOR_INVERSE_SQUARE = 0, /* c_k = k^-2 */
  GIBBSAR_PRIOR_EXPONENTIAL = 1     /* c_k = e^-k */
} gibbsar_prior_kind;

GIBBSAR_API const char* gibbsar_last_error(void);
GIBBSAR_API const char* gibbsar_status_name(gibbsar_status status);
GIBBSAR_API gibbsar_status gibbsar_parse_prior_kind(const char* name, gibbsar_prior_kind* out);

/* ---- theory calculators ---- */

typedef struct gibbsar_bound_constants {
  double K;
  double A_star;
  double A_tilde;
  double phi_A;
  double D_lip;
  double C1;
  double C2;
  double C3;
  double gamma0;
  double epsilon;
} gibbsar_bound_constants;

GIBBSAR_API gibbsar_status gibbsar_learning_rate(size_t T, double* out);
GIBBSAR_API gibbsar_status gibbsar_effective_dim(size_t T, double gamma, size_t* out);
GIBBSAR_API gibbsar_status gibbsar_oracle_constant(const gibbsar_bound_constants* c, double* out);
GIBBSAR_API gibbsar_status gibbsar_oracle_risk_bound(size_t T, double epsilon, double E,
                                                  double inf_risk, double* out);
GIBBSAR_API gibbsar_status gibbsar_mcmc_budget(size_t T, double epsilon, double A_eta_T,
                                               double* out);
/* May store +infinity. */
GIBBSAR_API gibbsar_status gibbsar_ar_budget(size_t T, double epsilon, double gamma0,
                                             double* out);
GIBBSAR_API gibbsar_status gibbsar_gamma0_upper_bound(double sigma, double K_bar, double delta1,
                                                      double* out);
GIBBSAR_API gibbsar_status gibbsar_gaussian_abs_exp_moment(double a, double* out);

/* ---- AR processes and risks ---- */

GIBBSAR_API gibbsar_status gibbsar_is_stable(const double* theta, size_t d, double margin,
                                             int* out);
GIBBSAR_API gibbsar_status gibbsar_sample_true_theta(size_t d, double delta, uint64_t seed,
                                                     double* out /* d entries */);
GIBBSAR_API gibbsar_status gibbsar_simulate(const double* theta, size_t d, double sigma,
                                            size_t T, uint64_t seed, double* out /* T */);
GIBBSAR_API gibbsar_status gibbsar_empirical_risk(const double* theta, size_t d,
                                                  const double* path, size_t T, double* out);
/* theta_hat may be shorter than max(d, dim); it is zero-padded. */
GIBBSAR_API gibbsar_status gibbsar_exact_risk(const double* true_theta, size_t d, double sigma,
                                              const double* theta_hat, size_t dim, double* out);

/* ---- Independent Hastings chain ---- */

typedef struct gibbsar_chain_options {
  double eta;     /* negative: use sqrt(T) / (4 ln T) */
  size_t n_star;  /* number of states, including the initial zero state */
  double gamma;   /* d_T = floor(ln(T)^gamma) */
  gibbsar_prior_kind prior;
  uint64_t seed;
} gibbsar_chain_options;

typedef struct gibbsar_chain_result gibbsar_chain_result;

GIBBSAR_API void gibbsar_chain_options_init(gibbsar_chain_options* opts);
GIBBSAR_API gibbsar_status gibbsar_run_chain(const double* path, size_t T,
                                             const gibbsar_chain_options* opts,
                                             gibbsar_chain_result** out);
GIBBSAR_API size_t gibbsar_chain_dim(const gibbsar_chain_result* r);
GIBBSAR_API double gibbsar_chain_eta(const gibbsar_chain_result* r);
GIBBSAR_API size_t gibbsar_chain_acceptance_count(const gibbsar_chain_result* r);
GIBBSAR_API double gibbsar_chain_acceptance_rate(const gibbsar_chain_result* r);
GIBBSAR_API gibbsar_status gibbsar_chain_theta_bar(const gibbsar_chain_result* r, double* buf,
                                                   size_t cap, size_t* len);
GIBBSAR_API void gibbsar_chain_free(gibbsar_chain_result* r);

/* ---- experiment ---- */

typedef struct gibbsar_config gibbsar_config;
typedef struct gibbsar_results gibbsar_results;

GIBBSAR_API gibbsar_status gibbsar_config_default(gibbsar_config** out);
GIBBSAR_API gibbsar_status gibbsar_config_load(const char* path, gibbsar_config** out);
GIBBSAR_API gibbsar_status gibbsar_config_parse(const char* text, gibbsar_config** out);
/* Same `key = value` syntax as the config file. Validates the result. */
GIBBSAR_API gibbsar_status gibbsar_config_set(gibbsar_config* cfg, const char* key,
                                              const char* value);
/* Pointer stays valid until the config is modified or freed. */
GIBBSAR_API const char* gibbsar_config_output_dir(const gibbsar_config* cfg);
GIBBSAR_API double gibbsar_config_quantile(const gibbsar_config* cfg);
GIBBSAR_API void gibbsar_config_free(gibbsar_config* cfg);

GIBBSAR_API gibbsar_status gibbsar_experiment_run(const gibbsar_config* cfg,
                                                  gibbsar_results** out);
GIBBSAR_API gibbsar_status gibbsar_results_read_csv(const char* path, gibbsar_results** out);
GIBBSAR_API size_t gibbsar_results_row_count(const gibbsar_results* res);
GIBBSAR_API gibbsar_status gibbsar_results_true_theta(const gibbsar_results* res, double* buf,
                                                      size_t cap, size_t* len);
GIBBSAR_API gibbsar_status gibbsar_results_write_csv(const gibbsar_results* res,
                                                     const char* path);
GIBBSAR_API gibbsar_status gibbsar_results_write_plot(const gibbsar_results* res, double q,
                                                      const char* path);
/* Quantile curves of excess risk, one per (prior, n_star), T ascending. */
GIBBSAR_API gibbsar_status gibbsar_results_curve_count(const gibbsar_results* res, double q,
                                                       size_t* out);
GIBBSAR_API gibbsar_status gibbsar_results_curve(const gibbsar_results* res, double q,
                                                 size_t index, gibbsar_prior_kind* prior,
                                                 size_t* n_star, size_t* T_buf, double* value_buf,
                                                 size_t cap, size_t* len);
GIBBSAR_API void gibbsar_results_free(gibbsar_results* res);

#ifdef __cplusplus
}
#endif

#endif /* GIBBSAR_H */

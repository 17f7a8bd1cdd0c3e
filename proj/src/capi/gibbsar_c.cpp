#include "gibbsar/gibbsar.h"

#include <algorithm>
#include <exception>
#include <memory>
#include <new>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gibbsar/bounds.hpp"
#include "gibbsar/errors.hpp"
#include "gibbsar/gibbs_mcmc.hpp"
#include "gibbsar/harness.hpp"
#include "gibbsar/risk.hpp"
#include "gibbsar/stable_domain.hpp"
#include "gibbsar/timeseries.hpp"

struct gibbsar_chain_result {
  gibbsar::ChainSummary summary;
  double eta = 0.0;
};

struct gibbsar_config {
  gibbsar::ExperimentConfig config;
};

struct gibbsar_results {
  gibbsar::ExperimentResult result;
};

namespace {

thread_local std::string last_error;

gibbsar_status fail(gibbsar_status status, const char* what) {
  last_error = what;
  return status;
}

// Maps the core exception taxonomy onto status codes.
template <class Fn>
gibbsar_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return GIBBSAR_OK;
  } catch (const gibbsar::IoError& e) {
    return fail(GIBBSAR_IO_ERROR, e.what());
  } catch (const gibbsar::NumericalFailure& e) {
    return fail(GIBBSAR_NUMERICAL_FAILURE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(GIBBSAR_INVALID_ARGUMENT, e.what());
  } catch (const std::domain_error& e) {
    return fail(GIBBSAR_DOMAIN_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(GIBBSAR_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(GIBBSAR_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(GIBBSAR_INTERNAL_ERROR, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

gibbsar_status copy_out(std::span<const double> src, double* buf, size_t cap, size_t* len) {
  if (len) *len = src.size();
  if (src.size() > cap) return fail(GIBBSAR_BUFFER_TOO_SMALL, "output buffer too small");
  if (!src.empty() && !buf) return fail(GIBBSAR_INVALID_ARGUMENT, "null output buffer");
  std::copy(src.begin(), src.end(), buf);
  return GIBBSAR_OK;
}

gibbsar::PriorKind to_core(gibbsar_prior_kind kind) {
  switch (kind) {
    case GIBBSAR_PRIOR_INVERSE_SQUARE: return gibbsar::PriorKind::InverseSquare;
    case GIBBSAR_PRIOR_EXPONENTIAL: return gibbsar::PriorKind::Exponential;
  }
  throw std::invalid_argument("unknown prior kind");
}

gibbsar_prior_kind to_c(gibbsar::PriorKind kind) {
  return kind == gibbsar::PriorKind::InverseSquare ? GIBBSAR_PRIOR_INVERSE_SQUARE
                                                   : GIBBSAR_PRIOR_EXPONENTIAL;
}

std::span<const double> view(const double* p, size_t n) {
  require(p != nullptr || n == 0, "null input array");
  return {p, n};
}

}  // namespace

extern "C" {

const char* gibbsar_last_error(void) { return last_error.c_str(); }

const char* gibbsar_status_name(gibbsar_status status) {
  switch (status) {
    case GIBBSAR_OK: return "ok";
    case GIBBSAR_INVALID_ARGUMENT: return "invalid argument";
    case GIBBSAR_DOMAIN_ERROR: return "domain error";
    case GIBBSAR_NUMERICAL_FAILURE: return "numerical failure";
    case GIBBSAR_IO_ERROR: return "i/o error";
    case GIBBSAR_BUFFER_TOO_SMALL: return "buffer too small";
    case GIBBSAR_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

gibbsar_status gibbsar_parse_prior_kind(const char* name, gibbsar_prior_kind* out) {
  return guarded([&] {
    require(name && out, "null argument");
    *out = to_c(gibbsar::parse_prior_kind(name));
  });
}

gibbsar_status gibbsar_learning_rate(size_t T, double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = gibbsar::learning_rate(T);
  });
}

gibbsar_status gibbsar_effective_dim(size_t T, double gamma, size_t* out) {
  return guarded([&] {
    require(out, "null output");
    *out = gibbsar::effective_dim(T, gamma);
  });
}

gibbsar_status gibbsar_oracle_constant(const gibbsar_bound_constants* c, double* out) {
  return guarded([&] {
    require(c && out, "null argument");
    const gibbsar::BoundConstants bc{c->K,  c->A_star, c->A_tilde, c->phi_A,  c->D_lip,
                                     c->C1, c->C2,     c->C3,      c->gamma0, c->epsilon};
    gibbsar::validate(bc);
    *out = gibbsar::oracle_constant_E(bc);
  });
}

gibbsar_status gibbsar_oracle_risk_bound(size_t T, double epsilon, double E, double inf_risk,
                                      double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = gibbsar::oracle_risk_bound(T, epsilon, E, inf_risk);
  });
}

gibbsar_status gibbsar_mcmc_budget(size_t T, double epsilon, double A_eta_T, double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = gibbsar::mcmc_budget_M(T, epsilon, A_eta_T);
  });
}

gibbsar_status gibbsar_ar_budget(size_t T, double epsilon, double gamma0, double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = gibbsar::ar_budget_M_star(T, epsilon, gamma0);
  });
}

gibbsar_status gibbsar_gamma0_upper_bound(double sigma, double K_bar, double delta1,
                                          double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = gibbsar::gamma0_upper_bound(sigma, K_bar, delta1);
  });
}

gibbsar_status gibbsar_gaussian_abs_exp_moment(double a, double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = gibbsar::gaussian_abs_exp_moment(a);
  });
}

gibbsar_status gibbsar_is_stable(const double* theta, size_t d, double margin, int* out) {
  return guarded([&] {
    require(out, "null output");
    *out = gibbsar::is_stable(view(theta, d), margin) ? 1 : 0;
  });
}

gibbsar_status gibbsar_sample_true_theta(size_t d, double delta, uint64_t seed, double* out) {
  return guarded([&] {
    require(out, "null output");
    gibbsar::Rng rng(seed);
    const auto theta = gibbsar::sample_true_theta(d, delta, rng);
    std::copy(theta.begin(), theta.end(), out);
  });
}

gibbsar_status gibbsar_simulate(const double* theta, size_t d, double sigma, size_t T,
                                uint64_t seed, double* out) {
  return guarded([&] {
    require(out, "null output");
    const auto coeffs = view(theta, d);
    const gibbsar::ArParams params({coeffs.begin(), coeffs.end()}, sigma);
    gibbsar::Rng rng(seed);
    const auto path = gibbsar::simulate_stationary(params, T, rng);
    std::copy(path.values.begin(), path.values.end(), out);
  });
}

gibbsar_status gibbsar_empirical_risk(const double* theta, size_t d, const double* path,
                                      size_t T, double* out) {
  return guarded([&] {
    require(out, "null output");
    *out = gibbsar::empirical_risk(view(theta, d), view(path, T));
  });
}

gibbsar_status gibbsar_exact_risk(const double* true_theta, size_t d, double sigma,
                                  const double* theta_hat, size_t dim, double* out) {
  return guarded([&] {
    require(out, "null output");
    const auto coeffs = view(true_theta, d);
    const gibbsar::RiskOracle oracle(gibbsar::ArParams({coeffs.begin(), coeffs.end()}, sigma),
                                     dim);
    *out = gibbsar::exact_risk(view(theta_hat, dim), oracle);
  });
}

void gibbsar_chain_options_init(gibbsar_chain_options* opts) {
  if (!opts) return;
  opts->eta = -1.0;
  opts->n_star = 1000;
  opts->gamma = 1.0;
  opts->prior = GIBBSAR_PRIOR_INVERSE_SQUARE;
  opts->seed = 0;
}

gibbsar_status gibbsar_run_chain(const double* path, size_t T, const gibbsar_chain_options* opts,
                                 gibbsar_chain_result** out) {
  return guarded([&] {
    require(opts && out, "null argument");
    *out = nullptr;
    const auto x = view(path, T);
    gibbsar::ChainConfig cfg;
    cfg.eta = opts->eta < 0.0 ? gibbsar::learning_rate(T) : opts->eta;
    cfg.n_star = opts->n_star;
    cfg.prior = gibbsar::PriorSpec::make(to_core(opts->prior), T, opts->gamma);
    cfg.seed = opts->seed;
    auto result = std::make_unique<gibbsar_chain_result>();
    result->summary = gibbsar::run_chain(x, cfg);
    result->eta = cfg.eta;
    *out = result.release();
  });
}

size_t gibbsar_chain_dim(const gibbsar_chain_result* r) {
  return r ? r->summary.theta_bar.size() : 0;
}

double gibbsar_chain_eta(const gibbsar_chain_result* r) { return r ? r->eta : 0.0; }

size_t gibbsar_chain_acceptance_count(const gibbsar_chain_result* r) {
  return r ? r->summary.acceptance_count : 0;
}

double gibbsar_chain_acceptance_rate(const gibbsar_chain_result* r) {
  return r ? r->summary.acceptance_rate() : 0.0;
}

gibbsar_status gibbsar_chain_theta_bar(const gibbsar_chain_result* r, double* buf, size_t cap,
                                       size_t* len) {
  if (!r) return fail(GIBBSAR_INVALID_ARGUMENT, "null chain result");
  return copy_out(r->summary.theta_bar, buf, cap, len);
}

void gibbsar_chain_free(gibbsar_chain_result* r) { delete r; }

gibbsar_status gibbsar_config_default(gibbsar_config** out) {
  return guarded([&] {
    require(out, "null output");
    *out = new gibbsar_config{};
  });
}

gibbsar_status gibbsar_config_load(const char* path, gibbsar_config** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = nullptr;
    auto cfg = std::make_unique<gibbsar_config>();
    cfg->config = gibbsar::load_config(path);
    *out = cfg.release();
  });
}

gibbsar_status gibbsar_config_parse(const char* text, gibbsar_config** out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = nullptr;
    auto cfg = std::make_unique<gibbsar_config>();
    cfg->config = gibbsar::parse_config(text);
    *out = cfg.release();
  });
}

gibbsar_status gibbsar_config_set(gibbsar_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg && key && value, "null argument");
    auto updated = cfg->config;
    gibbsar::apply_config_entry(updated, key, value);
    updated.validate();
    cfg->config = std::move(updated);
  });
}

const char* gibbsar_config_output_dir(const gibbsar_config* cfg) {
  return cfg ? cfg->config.output_dir.c_str() : "";
}

double gibbsar_config_quantile(const gibbsar_config* cfg) {
  return cfg ? cfg->config.quantile_q : 0.0;
}

void gibbsar_config_free(gibbsar_config* cfg) { delete cfg; }

gibbsar_status gibbsar_experiment_run(const gibbsar_config* cfg, gibbsar_results** out) {
  return guarded([&] {
    require(cfg && out, "null argument");
    *out = nullptr;
    auto res = std::make_unique<gibbsar_results>();
    res->result = gibbsar::run_experiment(cfg->config);
    *out = res.release();
  });
}

gibbsar_status gibbsar_results_read_csv(const char* path, gibbsar_results** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = nullptr;
    auto res = std::make_unique<gibbsar_results>();
    res->result.rows = gibbsar::read_csv(path);
    *out = res.release();
  });
}

size_t gibbsar_results_row_count(const gibbsar_results* res) {
  return res ? res->result.rows.size() : 0;
}

gibbsar_status gibbsar_results_true_theta(const gibbsar_results* res, double* buf, size_t cap,
                                          size_t* len) {
  if (!res) return fail(GIBBSAR_INVALID_ARGUMENT, "null results");
  return copy_out(res->result.true_theta, buf, cap, len);
}

gibbsar_status gibbsar_results_write_csv(const gibbsar_results* res, const char* path) {
  return guarded([&] {
    require(res && path, "null argument");
    gibbsar::emit_csv(res->result.rows, path);
  });
}

gibbsar_status gibbsar_results_write_plot(const gibbsar_results* res, double q,
                                          const char* path) {
  return guarded([&] {
    require(res && path, "null argument");
    gibbsar::emit_plot(res->result.rows, q, path);
  });
}

gibbsar_status gibbsar_results_curve_count(const gibbsar_results* res, double q, size_t* out) {
  return guarded([&] {
    require(res && out, "null argument");
    *out = gibbsar::quantile_curves(res->result.rows, q).size();
  });
}

gibbsar_status gibbsar_results_curve(const gibbsar_results* res, double q, size_t index,
                                     gibbsar_prior_kind* prior, size_t* n_star, size_t* T_buf,
                                     double* value_buf, size_t cap, size_t* len) {
  gibbsar_status status = GIBBSAR_OK;
  const auto rc = guarded([&] {
    require(res, "null results");
    const auto curves = gibbsar::quantile_curves(res->result.rows, q);
    require(index < curves.size(), "curve index out of range");
    const auto& c = curves[index];
    if (prior) *prior = to_c(c.prior);
    if (n_star) *n_star = c.n_star;
    if (len) *len = c.T.size();
    if (c.T.size() > cap) {
      status = fail(GIBBSAR_BUFFER_TOO_SMALL, "output buffer too small");
      return;
    }
    require((T_buf && value_buf) || c.T.empty(), "null output buffer");
    std::copy(c.T.begin(), c.T.end(), T_buf);
    std::copy(c.value.begin(), c.value.end(), value_buf);
  });
  return rc != GIBBSAR_OK ? rc : status;
}

void gibbsar_results_free(gibbsar_results* res) { delete res; }

}  // extern "C"

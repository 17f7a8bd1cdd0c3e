#include "gibbsar/gibbs_mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gibbsar/errors.hpp"
#include "gibbsar/risk.hpp"

namespace gibbsar {

double learning_rate(std::size_t T) {
  if (T < 4) throw std::invalid_argument("learning_rate requires T >= 4");
  const auto t = static_cast<double>(T);
  return std::sqrt(t) / (4.0 * std::log(t));
}

std::size_t effective_dim(std::size_t T, double gamma) {
  if (T < 4) throw std::invalid_argument("effective_dim requires T >= 4");
  if (!(gamma >= 1.0)) throw std::invalid_argument("effective_dim requires gamma >= 1");
  const double raw = std::floor(std::pow(std::log(static_cast<double>(T)), gamma));
  const auto dim = static_cast<std::size_t>(raw);
  return std::max<std::size_t>(1, std::min(dim, T / 2));
}

double acceptance_ratio(double eta, double r_current, double r_candidate) noexcept {
  return std::exp(eta * r_current - eta * r_candidate);
}

double ChainSummary::acceptance_rate() const noexcept {
  if (n_star < 2) return 0.0;
  return static_cast<double>(acceptance_count) / static_cast<double>(n_star - 1);
}

ChainSummary run_chain(std::span<const double> path, const ChainConfig& config,
                       const StateObserver& observer) {
  if (!(config.eta >= 0.0) || !std::isfinite(config.eta))
    throw std::invalid_argument("run_chain: eta must be finite and >= 0");
  if (config.n_star < 1) throw std::invalid_argument("run_chain: n_star must be >= 1");
  if (path.size() < 4) throw std::invalid_argument("run_chain: path needs T >= 4");
  const auto& prior = config.prior;
  if (prior.d_T < 1 || prior.order_weights.size() != prior.d_T)
    throw std::invalid_argument("run_chain: malformed prior");

  Rng rng(config.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<double> state(prior.d_T, 0.0);
  double state_risk = empirical_risk(state, path);
  std::vector<double> sum(prior.d_T, 0.0);
  std::size_t accepted = 0;

  auto record = [&](std::size_t i) {
    for (std::size_t j = 0; j < state.size(); ++j) sum[j] += state[j];
    if (observer) observer(i, state);
  };

  record(0);
  for (std::size_t i = 1; i < config.n_star; ++i) {
    auto candidate = sample_prior(prior, rng);
    const double candidate_risk = empirical_risk(candidate, path);
    const double u = unif(rng);
    if (u <= acceptance_ratio(config.eta, state_risk, candidate_risk)) {
      state = std::move(candidate);
      state_risk = candidate_risk;
      ++accepted;
    }
    record(i);
  }

  ChainSummary out;
  out.theta_bar.resize(prior.d_T);
  const auto n = static_cast<double>(config.n_star);
  for (std::size_t j = 0; j < sum.size(); ++j) out.theta_bar[j] = sum[j] / n;
  out.acceptance_count = accepted;
  out.n_star = config.n_star;
  out.final_state = std::move(state);
  return out;
}

std::vector<double> gibbs_weights(std::span<const double> risks, double eta) {
  if (risks.empty()) throw std::invalid_argument("gibbs_weights: no risks");
  double max_log = -std::numeric_limits<double>::infinity();
  for (double r : risks) max_log = std::max(max_log, -eta * r);
  std::vector<double> w(risks.size());
  double total = 0.0;
  for (std::size_t i = 0; i < risks.size(); ++i) {
    w[i] = std::exp(-eta * risks[i] - max_log);
    total += w[i];
  }
  if (!(total > 0.0) || !std::isfinite(total))
    throw NumericalFailure("gibbs_weights: all importance weights underflowed");
  for (double& v : w) v /= total;
  return w;
}

GibbsMeanEstimate gibbs_mean_oracle(std::span<const double> path, const PriorSpec& prior,
                                    double eta, std::size_t n_draws, Rng& rng) {
  if (n_draws < 1) throw std::invalid_argument("gibbs_mean_oracle: n_draws must be >= 1");
  const std::size_t dim = prior.d_T;
  std::vector<double> draws(n_draws * dim);
  std::vector<double> risks(n_draws);
  for (std::size_t i = 0; i < n_draws; ++i) {
    auto theta = sample_prior(prior, rng);
    risks[i] = empirical_risk(theta, path);
    std::copy(theta.begin(), theta.end(), draws.begin() + static_cast<std::ptrdiff_t>(i * dim));
  }
  const auto w = gibbs_weights(risks, eta);

  GibbsMeanEstimate out;
  out.mean.assign(dim, 0.0);
  out.std_error.assign(dim, 0.0);
  double sum_sq_w = 0.0;
  for (std::size_t i = 0; i < n_draws; ++i) {
    sum_sq_w += w[i] * w[i];
    for (std::size_t j = 0; j < dim; ++j) out.mean[j] += w[i] * draws[i * dim + j];
  }
  for (std::size_t i = 0; i < n_draws; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      const double dev = draws[i * dim + j] - out.mean[j];
      out.std_error[j] += w[i] * w[i] * dev * dev;
    }
  for (double& v : out.std_error) v = std::sqrt(v);
  out.effective_sample_size = 1.0 / sum_sq_w;
  return out;
}

}  // namespace gibbsar

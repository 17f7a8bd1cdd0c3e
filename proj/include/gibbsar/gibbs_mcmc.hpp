#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gibbsar/random.hpp"
#include "gibbsar/stable_domain.hpp"

namespace gibbsar {

/// eta_T = sqrt(T) / (4 ln T). Throws std::invalid_argument for T < 4.
double learning_rate(std::size_t T);

/// d_T = min(floor(ln(T)^gamma), floor(T / 2)).
std::size_t effective_dim(std::size_t T, double gamma);

/// exp(eta (r_current - r_candidate)); not clipped at 1.
double acceptance_ratio(double eta, double r_current, double r_candidate) noexcept;

struct ChainConfig {
  double eta = 0.0;
  std::size_t n_star = 1;
  PriorSpec prior;
  std::uint64_t seed = 0;
};

struct ChainSummary {
  std::vector<double> theta_bar;
  std::size_t acceptance_count = 0;
  std::size_t n_star = 0;
  std::vector<double> final_state;

  /// acceptance_count / (n_star - 1); zero when no proposal was made.
  double acceptance_rate() const noexcept;
};

/// Called once per chain state, i = 0..n_star-1, with the state vector.
using StateObserver = std::function<void(std::size_t index, std::span<const double> state)>;

/// Independent Hastings sampler targeting the Gibbs measure
/// prior(d theta) exp(-eta r_T(theta | path)). Starts at theta_0 = 0, draws
/// every proposal from the prior, and returns the average of all n_star
/// states including theta_0.
ChainSummary run_chain(std::span<const double> path, const ChainConfig& config,
                       const StateObserver& observer = {});

/// Self-normalized importance sampling estimate of the Gibbs mean with the
/// prior as proposal and weights exp(-eta r_T). Log-weights are shifted by
/// their maximum before exponentiation.
struct GibbsMeanEstimate {
  std::vector<double> mean;
  std::vector<double> std_error;  // delta-method standard errors
  double effective_sample_size = 0.0;
};

GibbsMeanEstimate gibbs_mean_oracle(std::span<const double> path, const PriorSpec& prior,
                                    double eta, std::size_t n_draws, Rng& rng);

/// Self-normalized weights exp(-eta r_i - max) / sum, from a list of risks.
/// Throws NumericalFailure if every weight underflows.
std::vector<double> gibbs_weights(std::span<const double> risks, double eta);

}  // namespace gibbsar

#include "gibbsar/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gibbsar {

std::size_t effective_order(std::span<const double> theta) noexcept {
  for (std::size_t j = theta.size(); j > 0; --j)
    if (theta[j - 1] != 0.0) return j;
  return 1;
}

double empirical_risk(std::span<const double> theta, std::span<const double> path) {
  const std::size_t d = effective_order(theta);
  const std::size_t T = path.size();
  if (d >= T) throw std::invalid_argument("empirical_risk: predictor order >= path length");

  double total = 0.0;
  for (std::size_t t = d; t < T; ++t) {
    double pred = 0.0;
    for (std::size_t j = 1; j <= d && j <= theta.size(); ++j) pred += theta[j - 1] * path[t - j];
    total += absolute_loss(pred, path[t]);
  }
  return total / static_cast<double>(T - d);
}

RiskOracle::RiskOracle(ArParams true_params, std::size_t dim)
    : params_(std::move(true_params)) {
  const std::size_t n = std::max(dim, params_.order());
  gamma_ = covariance_matrix(params_, n);
  padded_.assign(n, 0.0);
  const auto theta = params_.theta();
  std::copy(theta.begin(), theta.end(), padded_.begin());
}

double exact_risk(std::span<const double> theta_hat, const RiskOracle& oracle) {
  const std::size_t n = oracle.dim();
  if (theta_hat.size() > n)
    throw std::invalid_argument("exact_risk: predictor longer than the oracle dimension");
  Eigen::VectorXd diff(static_cast<Eigen::Index>(n));
  const auto truth = oracle.padded_theta();
  for (std::size_t i = 0; i < n; ++i) {
    const double th = i < theta_hat.size() ? theta_hat[i] : 0.0;
    diff(static_cast<Eigen::Index>(i)) = th - truth[i];
  }
  const double quad = std::max(0.0, diff.dot(oracle.gamma_matrix() * diff));
  const double sigma = oracle.true_params().sigma();
  return std::sqrt((2.0 * quad + 2.0 * sigma * sigma) / std::numbers::pi);
}

double excess_risk(double risk, double sigma) noexcept {
  return risk - std::sqrt(2.0 / std::numbers::pi) * sigma * sigma;
}

double minimal_risk(double sigma) noexcept { return sigma * std::sqrt(2.0 / std::numbers::pi); }

}  // namespace gibbsar

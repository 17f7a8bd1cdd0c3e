#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gibbsar/timeseries.hpp"

namespace gibbsar {

/// l(y, z) = |y - z|.
inline double absolute_loss(double y, double z) noexcept { return y > z ? y - z : z - y; }

/// Index of the last nonzero coefficient; 1 for the zero vector.
std::size_t effective_order(std::span<const double> theta) noexcept;

/// Mean absolute one-step prediction error of x_t ~ sum_j theta_j x_{t-j}
/// over t = d(theta)+1..T. Throws std::invalid_argument if d(theta) >= T.
double empirical_risk(std::span<const double> theta, std::span<const double> path);

/// Closed-form risk of linear predictors for a Gaussian AR process.
///
/// The covariance matrix has dimension max(d, requested), and both the true
/// coefficients and the predictor are zero-padded to it. When requested >= d
/// this is exactly the d_T x d_T matrix of the textbook formula.
class RiskOracle {
 public:
  RiskOracle(ArParams true_params, std::size_t dim);

  const ArParams& true_params() const noexcept { return params_; }
  const Eigen::MatrixXd& gamma_matrix() const noexcept { return gamma_; }
  std::span<const double> padded_theta() const noexcept { return padded_; }
  std::size_t dim() const noexcept { return padded_.size(); }

 private:
  ArParams params_;
  Eigen::MatrixXd gamma_;
  std::vector<double> padded_;
};

/// R(theta_hat) = sqrt(2 (theta_hat - theta)' Gamma (theta_hat - theta) + 2 sigma^2) / sqrt(pi).
/// theta_hat may be shorter than oracle.dim() (it is zero-padded); a longer
/// one throws std::invalid_argument.
double exact_risk(std::span<const double> theta_hat, const RiskOracle& oracle);

/// risk - sqrt(2/pi) sigma^2.
double excess_risk(double risk, double sigma) noexcept;

/// sigma sqrt(2/pi), the smallest achievable risk.
double minimal_risk(double sigma) noexcept;

}  // namespace gibbsar

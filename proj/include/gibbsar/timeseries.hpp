#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gibbsar/random.hpp"

namespace gibbsar {

/// Interior margin used by every stability test.
inline constexpr double kStabilityTol = 1e-9;

/// Parameters of a zero-mean Gaussian AR(d) process
///   X_t = theta_1 X_{t-1} + ... + theta_d X_{t-d} + sigma * xi_t.
/// Construction validates shape and sigma; stability is checked by the
/// operations that need it.
class ArParams {
 public:
  ArParams(std::vector<double> theta, double sigma);

  std::span<const double> theta() const noexcept { return theta_; }
  double sigma() const noexcept { return sigma_; }
  std::size_t order() const noexcept { return theta_.size(); }

 private:
  std::vector<double> theta_;
  double sigma_;
};

/// Observed sample X_1..X_T (stored zero-based).
struct Path {
  std::vector<double> values;

  std::size_t length() const noexcept { return values.size(); }
};

/// gamma_0..gamma_L.
struct AutocovSequence {
  std::vector<double> gammas;

  std::size_t max_lag() const noexcept { return gammas.size() - 1; }
};

/// Companion matrix: first row theta', ones on the subdiagonal.
Eigen::MatrixXd companion_matrix(std::span<const double> theta);

/// Largest eigenvalue modulus of the companion matrix.
double spectral_radius(std::span<const double> theta);

/// True iff every companion eigenvalue has modulus <= margin - kStabilityTol.
/// Throws std::invalid_argument on empty or non-finite theta, or margin
/// outside (0, 1].
bool is_stable(std::span<const double> theta, double margin = 1.0);

/// Autocovariances of the stationary solution up to max_lag, from the
/// Yule-Walker system and the AR recursion beyond lag d.
AutocovSequence autocovariances(const ArParams& params, std::size_t max_lag);

/// dim x dim Toeplitz matrix of autocovariances.
Eigen::MatrixXd covariance_matrix(const ArParams& params, std::size_t dim);

/// Draws X_1..X_T from the stationary law: the first d values jointly
/// Gaussian with the stationary covariance, the rest by the AR recursion.
Path simulate_stationary(const ArParams& params, std::size_t length, Rng& rng);

}  // namespace gibbsar

#include "gibbsar/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace gibbsar {

namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x))
      throw std::invalid_argument(std::string(what) + " has non-finite entries");
}

void require_stable(const ArParams& params) {
  if (!is_stable(params.theta(), 1.0))
    throw std::domain_error("AR coefficients are outside the stability domain");
}

}  // namespace

ArParams::ArParams(std::vector<double> theta, double sigma)
    : theta_(std::move(theta)), sigma_(sigma) {
  if (theta_.empty()) throw std::invalid_argument("AR order must be at least 1");
  require_finite(theta_, "theta");
  if (!(sigma_ > 0.0) || !std::isfinite(sigma_))
    throw std::invalid_argument("sigma must be positive and finite");
}

Eigen::MatrixXd companion_matrix(std::span<const double> theta) {
  if (theta.empty()) throw std::invalid_argument("companion matrix of empty theta");
  const auto d = static_cast<Eigen::Index>(theta.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) a(0, j) = theta[static_cast<std::size_t>(j)];
  for (Eigen::Index i = 1; i < d; ++i) a(i, i - 1) = 1.0;
  return a;
}

double spectral_radius(std::span<const double> theta) {
  require_finite(theta, "theta");
  if (theta.size() == 1) return std::abs(theta[0]);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion_matrix(theta),
                                             /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("companion eigenvalue computation failed");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_stable(std::span<const double> theta, double margin) {
  if (!(margin > 0.0 && margin <= 1.0))
    throw std::invalid_argument("stability margin must lie in (0, 1]");
  if (theta.empty()) throw std::invalid_argument("empty coefficient vector");
  return spectral_radius(theta) <= margin - kStabilityTol;
}

AutocovSequence autocovariances(const ArParams& params, std::size_t max_lag) {
  require_stable(params);
  const auto theta = params.theta();
  const std::size_t d = theta.size();

  // Unknowns gamma_0..gamma_d:
  //   gamma_h - sum_j theta_j gamma_{|h-j|} = sigma^2 [h == 0],  h = 0..d.
  const auto n = static_cast<Eigen::Index>(d + 1);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (std::size_t h = 0; h <= d; ++h)
    for (std::size_t j = 1; j <= d; ++j) {
      const std::size_t lag = h >= j ? h - j : j - h;
      m(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(lag)) -= theta[j - 1];
    }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(0) = params.sigma() * params.sigma();
  const Eigen::VectorXd sol = m.fullPivLu().solve(rhs);

  AutocovSequence out;
  out.gammas.resize(std::max(max_lag, d) + 1);
  for (std::size_t h = 0; h <= d; ++h) out.gammas[h] = sol(static_cast<Eigen::Index>(h));
  for (std::size_t h = d + 1; h < out.gammas.size(); ++h) {
    double g = 0.0;
    for (std::size_t j = 1; j <= d; ++j) g += theta[j - 1] * out.gammas[h - j];
    out.gammas[h] = g;
  }
  out.gammas.resize(max_lag + 1);
  return out;
}

Eigen::MatrixXd covariance_matrix(const ArParams& params, std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("covariance dimension must be >= 1");
  const auto acv = autocovariances(params, dim - 1);
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      g(i, j) = acv.gammas[static_cast<std::size_t>(std::abs(i - j))];
  return g;
}

Path simulate_stationary(const ArParams& params, std::size_t length, Rng& rng) {
  if (length == 0) throw std::invalid_argument("path length must be >= 1");
  const auto theta = params.theta();
  const std::size_t d = theta.size();

  Eigen::LLT<Eigen::MatrixXd> llt(covariance_matrix(params, d));
  if (llt.info() != Eigen::Success)
    throw std::domain_error("stationary covariance is not positive definite");

  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
  const Eigen::VectorXd init = llt.matrixL() * z;

  std::vector<double> x(std::max(length, d));
  for (std::size_t i = 0; i < d; ++i) x[i] = init(static_cast<Eigen::Index>(i));
  for (std::size_t t = d; t < x.size(); ++t) {
    double v = params.sigma() * normal(rng);
    for (std::size_t j = 1; j <= d; ++j) v += theta[j - 1] * x[t - j];
    x[t] = v;
  }
  x.resize(length);
  return Path{std::move(x)};
}

}  // namespace gibbsar

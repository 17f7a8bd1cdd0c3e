#include "gibbsar/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gibbsar {

namespace {

void require_sample_size(std::size_t T) {
  if (T < 4) throw std::invalid_argument("bounds require T >= 4");
}

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1]");
}

}  // namespace

void validate(const BoundConstants& c) {
  if (!(c.K > 0.0)) throw std::invalid_argument("K must be positive");
  if (!(c.A_star > 0.0)) throw std::invalid_argument("A* must be positive");
  if (!(c.A_tilde > 0.0)) throw std::invalid_argument("A~* must be positive");
  if (!(c.phi_A > 0.0)) throw std::invalid_argument("phi(A*) must be positive");
  if (!(c.D_lip > 0.0)) throw std::invalid_argument("D must be positive");
  if (!(c.C1 >= 0.0)) throw std::invalid_argument("C1 must be >= 0");
  if (!(c.C2 > 0.0 && c.C2 <= 1.0)) throw std::invalid_argument("C2 must lie in (0, 1]");
  if (!(c.C3 > 0.0 && c.C3 <= 1.0)) throw std::invalid_argument("C3 must lie in (0, 1]");
  if (!(c.gamma0 > 0.0)) throw std::invalid_argument("gamma0 must be positive");
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
}

double oracle_constant_E(const BoundConstants& c) {
  const double ln2 = std::numbers::ln2;
  const double K = c.K;
  const double a_ratio = (c.A_star + c.A_tilde) / c.A_tilde;
  return c.C1 + 8.0 + 2.0 / ln2
         - 2.0 * std::log(c.C2) / (ln2 * ln2)
         - 4.0 * std::log(c.C3) / ln2
         + 8.0 * K * K * a_ratio * a_ratio
         + K * c.D_lip * c.C3 / (8.0 * ln2 * ln2 * ln2)
         + 4.0 * K * c.phi_A / ln2
         + 2.0 * K * K * c.phi_A / (ln2 * ln2);
}

double oracle_risk_bound(std::size_t T, double epsilon, double E, double inf_risk) {
  require_sample_size(T);
  require_epsilon(epsilon);
  const auto t = static_cast<double>(T);
  const double lt = std::log(t);
  const double rt = std::sqrt(t);
  return inf_risk + E * lt * lt * lt / rt + 8.0 * (lt / rt) * std::log(1.0 / epsilon);
}

double mcmc_budget_M(std::size_t T, double epsilon, double A_eta_T) {
  require_sample_size(T);
  require_epsilon(epsilon);
  if (!(A_eta_T >= 0.0)) throw std::invalid_argument("A must be >= 0");
  const auto t = static_cast<double>(T);
  const double lt = std::log(t);
  const double lt3 = lt * lt * lt;
  return A_eta_T * A_eta_T * t / (epsilon * epsilon * lt3 * lt3);
}

double ar_budget_M_star(std::size_t T, double epsilon, double gamma0) {
  require_sample_size(T);
  require_epsilon(epsilon);
  if (!(gamma0 >= 0.0)) throw std::invalid_argument("gamma0 must be >= 0");
  if (gamma0 == 0.0) return 0.0;
  const auto t = static_cast<double>(T);
  const double log_value = std::log(9.0) + 3.0 * std::log(gamma0) + 2.0 * std::log(t)
                           + gamma0 * t / 16.0
                           - std::log(2.0 * std::numbers::pi)
                           - 2.0 * std::log(epsilon) - 3.0 * std::log(std::log(t));
  return std::exp(log_value);  // +inf on overflow
}

double gamma0_upper_bound(double sigma, double K_bar, double delta1) {
  if (!(delta1 > 0.0 && delta1 < 1.0))
    throw std::invalid_argument("delta1 must lie in (0, 1)");
  return K_bar * K_bar * sigma * sigma / (1.0 - delta1 * delta1);
}

double gaussian_abs_exp_moment(double a) {
  // Phi(a) = erfc(-a / sqrt 2) / 2
  return std::exp(0.5 * a * a) * std::erfc(-a / std::numbers::sqrt2);
}

}  // namespace gibbsar

#pragma once

#include <cstddef>

namespace gibbsar {

/// Ingredients of the oracle-inequality constant.
struct BoundConstants {
  double K = 1.0;        // Lipschitz constant of the loss
  double A_star = 0.0;   // sum_j A_j
  double A_tilde = 0.0;  // sum_j j A_j
  double phi_A = 1.0;    // E exp(A_star |xi|)
  double D_lip = 0.0;    // Lipschitz constant of theta -> f_theta
  double C1 = 0.0;
  double C2 = 1.0;
  double C3 = 1.0;
  double gamma0 = 1.0;
  double epsilon = 0.1;
};

/// Throws std::invalid_argument unless every constant is in range.
void validate(const BoundConstants& c);

/// Constant of the oracle inequality (natural logarithms):
///   C1 + 8 + 2/ln2 - 2 ln C2 / ln^2 2 - 4 ln C3 / ln2
///   + 8 K^2 (A* + A~*)^2 / A~*^2 + K D C3 / (8 ln^3 2)
///   + 4 K phi / ln2 + 2 K^2 phi / ln^2 2.
double oracle_constant_E(const BoundConstants& c);

/// inf_risk + E ln^3 T / sqrt(T) + 8 (ln T / sqrt(T)) ln(1 / epsilon).
double oracle_risk_bound(std::size_t T, double epsilon, double E, double inf_risk);

/// A^2 T / (epsilon^2 ln^6 T).
double mcmc_budget_M(std::size_t T, double epsilon, double A_eta_T);

/// 9 gamma0^3 T^2 exp(gamma0 T / 16) / (2 pi epsilon^2 ln^3 T). Evaluated in
/// log space; returns +infinity when the value exceeds the double range.
double ar_budget_M_star(std::size_t T, double epsilon, double gamma0);

/// K^2 sigma^2 / (1 - delta1^2). Throws std::invalid_argument unless
/// 0 < delta1 < 1.
double gamma0_upper_bound(double sigma, double K_bar, double delta1);

/// E exp(a |xi|) for xi ~ N(0, 1): 2 exp(a^2/2) Phi(a).
double gaussian_abs_exp_moment(double a);

}  // namespace gibbsar

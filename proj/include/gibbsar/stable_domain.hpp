#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "gibbsar/random.hpp"

namespace gibbsar {

/// Reflection (partial autocorrelation) coefficients, each in (-1, 1).
struct ReflectionCoeffs {
  std::vector<double> r;
};

/// Levinson step-up: maps (-1,1)^k onto the interior of the AR(k) stability
/// domain. a^(m)_j = a^(m-1)_j - r_m a^(m-1)_{m-j}, a^(m)_m = r_m.
std::vector<double> step_up(const ReflectionCoeffs& coeffs);

/// Inverse of step_up. Throws std::domain_error for unstable theta.
ReflectionCoeffs step_down(std::span<const double> theta);

/// Beta exponents (alpha, beta) of (r_m + 1) / 2 that make the step-up image
/// uniform on the stability domain. The step-up Jacobian is
///   prod_{m>=2} (1 - r_m)^ceil((m-1)/2) (1 + r_m)^floor((m-1)/2),
/// so r_m has density proportional to that factor.
struct BetaExponents {
  double alpha;  // exponent of (1 + r) plus one
  double beta;   // exponent of (1 - r) plus one
};
BetaExponents reflection_beta_exponents(std::size_t m);

/// Uniform (Lebesgue) draw from the interior of the AR(k) stability domain.
std::vector<double> sample_uniform_stable(std::size_t k, Rng& rng);

/// lambda = min(1, (ln T - 1) / ||theta||_1); returns
/// [lambda theta_1, ..., lambda^k theta_k, 0, ..., 0] of length padded_dim.
std::vector<double> rescale_F(std::span<const double> theta, std::size_t T,
                              std::size_t padded_dim);

enum class PriorKind { InverseSquare, Exponential };

std::string_view to_string(PriorKind kind) noexcept;
/// Accepts "inverse_square" / "exponential". Throws std::invalid_argument.
PriorKind parse_prior_kind(std::string_view name);

/// Order weights c_k proportional to k^-2 or e^-k, normalized over 1..max_order.
std::vector<double> order_prior(PriorKind kind, std::size_t max_order);

/// The parameter set Theta_T and its prior.
struct PriorSpec {
  double gamma = 1.0;
  std::size_t T = 0;
  std::size_t d_T = 0;
  double radius = 0.0;  // ln T - 1
  std::vector<double> order_weights;
  PriorKind kind = PriorKind::InverseSquare;

  /// Builds the spec for sample size T (d_T = min(floor(ln^gamma T), T/2)).
  static PriorSpec make(PriorKind kind, std::size_t T, double gamma = 1.0);
};

/// One draw from the prior: an order k from the order weights, then a uniform
/// point on the AR(k) stability domain passed through rescale_F.
std::vector<double> sample_prior(const PriorSpec& spec, Rng& rng);

/// Same as sample_prior but also reports the drawn order.
std::vector<double> sample_prior(const PriorSpec& spec, Rng& rng, std::size_t& order_out);

/// Uniform draw on the AR(d) stability domain, coefficient-scaled by
/// theta_j -> delta^j theta_j so that the result lies in s_d(delta).
std::vector<double> sample_true_theta(std::size_t d, double delta, Rng& rng);

}  // namespace gibbsar

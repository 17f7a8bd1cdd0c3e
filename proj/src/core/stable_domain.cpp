#include "gibbsar/stable_domain.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gibbsar/gibbs_mcmc.hpp"
#include "gibbsar/timeseries.hpp"

namespace gibbsar {

std::vector<double> step_up(const ReflectionCoeffs& coeffs) {
  const auto& r = coeffs.r;
  if (r.empty()) throw std::invalid_argument("step_up needs at least one coefficient");
  for (double v : r)
    if (!(std::abs(v) < 1.0))
      throw std::domain_error("reflection coefficient outside (-1, 1)");

  std::vector<double> a;
  a.reserve(r.size());
  std::vector<double> prev;
  for (std::size_t m = 1; m <= r.size(); ++m) {
    const double rm = r[m - 1];
    prev = a;
    for (std::size_t j = 1; j < m; ++j) a[j - 1] = prev[j - 1] - rm * prev[m - j - 1];
    a.push_back(rm);
  }
  return a;
}

ReflectionCoeffs step_down(std::span<const double> theta) {
  if (theta.empty()) throw std::invalid_argument("step_down of empty theta");
  if (!is_stable(theta, 1.0)) throw std::domain_error("step_down of an unstable theta");

  std::vector<double> a(theta.begin(), theta.end());
  ReflectionCoeffs out;
  out.r.resize(a.size());
  for (std::size_t m = a.size(); m >= 1; --m) {
    const double rm = a[m - 1];
    out.r[m - 1] = rm;
    if (m == 1) break;
    const double denom = 1.0 - rm * rm;
    std::vector<double> prev(m - 1);
    for (std::size_t j = 1; j < m; ++j)
      prev[j - 1] = (a[j - 1] + rm * a[m - j - 1]) / denom;
    a = std::move(prev);
  }
  return out;
}

BetaExponents reflection_beta_exponents(std::size_t m) {
  if (m == 0) throw std::invalid_argument("reflection index starts at 1");
  const std::size_t n = m - 1;
  const auto plus = static_cast<double>(n / 2);         // power of (1 + r)
  const auto minus = static_cast<double>((n + 1) / 2);  // power of (1 - r)
  return {plus + 1.0, minus + 1.0};
}

namespace {

double draw_beta(double alpha, double beta, Rng& rng) {
  std::gamma_distribution<double> ga(alpha, 1.0);
  std::gamma_distribution<double> gb(beta, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  return x / (x + y);
}

std::size_t draw_categorical(std::span<const double> weights, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return weights.size() - 1;
}

}  // namespace

std::vector<double> sample_uniform_stable(std::size_t k, Rng& rng) {
  if (k < 1) throw std::invalid_argument("sample_uniform_stable needs k >= 1");
  ReflectionCoeffs coeffs;
  coeffs.r.resize(k);
  for (;;) {
    bool inside = true;
    for (std::size_t m = 1; m <= k; ++m) {
      const auto e = reflection_beta_exponents(m);
      const double r = 2.0 * draw_beta(e.alpha, e.beta, rng) - 1.0;
      coeffs.r[m - 1] = r;
      inside = inside && std::abs(r) < 1.0;
    }
    if (!inside) continue;
    auto theta = step_up(coeffs);
    // Points numerically on the boundary are redrawn.
    if (is_stable(theta, 1.0)) return theta;
  }
}

std::vector<double> rescale_F(std::span<const double> theta, std::size_t T,
                              std::size_t padded_dim) {
  if (T < 4) throw std::invalid_argument("rescale_F requires T >= 4");
  if (theta.size() > padded_dim)
    throw std::invalid_argument("rescale_F: theta longer than the padded dimension");
  const double radius = std::log(static_cast<double>(T)) - 1.0;
  double l1 = 0.0;
  for (double v : theta) l1 += std::abs(v);
  const double lambda = l1 > radius ? radius / l1 : 1.0;

  std::vector<double> out(padded_dim, 0.0);
  double scale = 1.0;
  for (std::size_t j = 0; j < theta.size(); ++j) {
    scale *= lambda;
    out[j] = scale * theta[j];
  }
  return out;
}

std::string_view to_string(PriorKind kind) noexcept {
  switch (kind) {
    case PriorKind::InverseSquare: return "inverse_square";
    case PriorKind::Exponential: return "exponential";
  }
  return "unknown";
}

PriorKind parse_prior_kind(std::string_view name) {
  if (name == "inverse_square") return PriorKind::InverseSquare;
  if (name == "exponential") return PriorKind::Exponential;
  throw std::invalid_argument("unknown prior kind '" + std::string(name) + "'");
}

std::vector<double> order_prior(PriorKind kind, std::size_t max_order) {
  if (max_order < 1) throw std::invalid_argument("order prior needs max_order >= 1");
  std::vector<double> c(max_order);
  for (std::size_t k = 1; k <= max_order; ++k) {
    const auto kd = static_cast<double>(k);
    c[k - 1] = kind == PriorKind::InverseSquare ? 1.0 / (kd * kd) : std::exp(-kd);
  }
  const double total = std::accumulate(c.begin(), c.end(), 0.0);
  for (double& v : c) v /= total;
  return c;
}

PriorSpec PriorSpec::make(PriorKind kind, std::size_t T, double gamma) {
  PriorSpec spec;
  spec.kind = kind;
  spec.gamma = gamma;
  spec.T = T;
  spec.d_T = effective_dim(T, gamma);
  spec.radius = std::log(static_cast<double>(T)) - 1.0;
  spec.order_weights = order_prior(kind, spec.d_T);
  return spec;
}

std::vector<double> sample_prior(const PriorSpec& spec, Rng& rng, std::size_t& order_out) {
  const std::size_t k = draw_categorical(spec.order_weights, rng) + 1;
  order_out = k;
  return rescale_F(sample_uniform_stable(k, rng), spec.T, spec.d_T);
}

std::vector<double> sample_prior(const PriorSpec& spec, Rng& rng) {
  std::size_t k = 0;
  return sample_prior(spec, rng, k);
}

std::vector<double> sample_true_theta(std::size_t d, double delta, Rng& rng) {
  if (d < 1) throw std::invalid_argument("true order must be >= 1");
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0, 1]");
  for (;;) {
    auto theta = sample_uniform_stable(d, rng);
    double scale = 1.0;
    for (double& v : theta) {
      scale *= delta;
      v *= scale;
    }
    if (is_stable(theta, delta)) return theta;
  }
}

}  // namespace gibbsar

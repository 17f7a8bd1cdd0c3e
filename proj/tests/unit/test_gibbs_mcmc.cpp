#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gibbsar/errors.hpp"
#include "gibbsar/gibbs_mcmc.hpp"
#include "gibbsar/risk.hpp"
#include "gibbsar/timeseries.hpp"
#include "oracles.hpp"

using namespace gibbsar;

namespace {

std::vector<double> test_path(std::size_t T, std::uint64_t seed) {
  Rng rng(seed);
  return simulate_stationary(ArParams({0.5, -0.3}, 1.0), T, rng).values;
}

ChainConfig chain_config(std::size_t T, std::size_t n_star, double eta, std::uint64_t seed,
                         PriorKind kind = PriorKind::InverseSquare) {
  ChainConfig c;
  c.eta = eta;
  c.n_star = n_star;
  c.prior = PriorSpec::make(kind, T, 1.0);
  c.seed = seed;
  return c;
}

}  // namespace

TEST(LearningRate, Values) {
  EXPECT_NEAR(learning_rate(4096), 64.0 / (4.0 * std::log(4096.0)), 1e-15);
  EXPECT_NEAR(learning_rate(4096), 1.9235933878519512, 1e-12);
  EXPECT_NEAR(learning_rate(7), std::sqrt(7.0) / (4 * std::log(7.0)), 1e-15);
  EXPECT_THROW(learning_rate(3), std::invalid_argument);
}

TEST(LearningRate, IncreasingOnExperimentGrid) {
  for (std::size_t T = 8; T <= 4096; T *= 2) EXPECT_GT(learning_rate(2 * T), learning_rate(T));
}

TEST(EffectiveDim, Values) {
  EXPECT_EQ(effective_dim(4096, 1.0), 8u);
  EXPECT_EQ(effective_dim(64, 1.0), 4u);
  EXPECT_EQ(effective_dim(4, 1.0), 1u);
  EXPECT_EQ(effective_dim(64, 2.0), 17u);  // floor(4.1589^2)
  EXPECT_EQ(effective_dim(8, 3.0), 4u);    // floor(8.96) capped at T/2
  EXPECT_THROW(effective_dim(3, 1.0), std::invalid_argument);
  EXPECT_THROW(effective_dim(64, 0.5), std::invalid_argument);
}

TEST(AcceptanceRatio, Values) {
  EXPECT_EQ(acceptance_ratio(1.7, 0.4, 0.4), 1.0);
  EXPECT_NEAR(acceptance_ratio(2.0, 0.5, 0.25), std::exp(0.5), 1e-15);
  Rng rng(1);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double eta = u(rng), a = u(rng), b = u(rng);
    EXPECT_NEAR(acceptance_ratio(eta, a, b) * acceptance_ratio(eta, b, a), 1.0, 1e-14);
  }
}

TEST(RunChain, SingleStateIsZero) {
  const auto x = test_path(64, 1);
  const auto s = run_chain(x, chain_config(64, 1, 1.0, 9));
  EXPECT_EQ(s.theta_bar, std::vector<double>(4, 0.0));
  EXPECT_EQ(s.acceptance_count, 0u);
  EXPECT_EQ(s.acceptance_rate(), 0.0);
}

TEST(RunChain, AllRejectedKeepsZero) {
  // Zero predicts this path perfectly; every candidate has positive risk and
  // the huge eta drives its acceptance probability to 0.
  std::vector<double> x(32, 0.0);
  x[0] = 1e6;
  const auto s = run_chain(x, chain_config(32, 500, 1e12, 2));
  EXPECT_EQ(s.acceptance_count, 0u);
  EXPECT_EQ(s.theta_bar, std::vector<double>(3, 0.0));
  EXPECT_EQ(s.final_state, std::vector<double>(3, 0.0));
}

TEST(RunChain, ZeroEtaAcceptsEverythingAndAveragesThePrior) {
  const std::size_t T = 128, n = 40000;
  const auto x = test_path(T, 3);
  const auto cfg = chain_config(T, n, 0.0, 77);
  std::vector<std::vector<double>> states;
  const auto s = run_chain(x, cfg, [&](std::size_t, std::span<const double> st) {
    states.emplace_back(st.begin(), st.end());
  });
  EXPECT_EQ(s.acceptance_count, n - 1);
  EXPECT_EQ(s.acceptance_rate(), 1.0);

  Rng rng(12345);
  for (std::size_t j = 0; j < cfg.prior.d_T; ++j) {
    std::vector<double> direct(n);
    for (auto& v : direct) v = sample_prior(cfg.prior, rng)[j];
    const auto ref = oracle::mean_se(direct);
    std::vector<double> chain_j(n);
    for (std::size_t i = 0; i < n; ++i) chain_j[i] = states[i][j];
    const auto ch = oracle::mean_se(chain_j);
    EXPECT_NEAR(s.theta_bar[j], ref.mean, 3 * std::hypot(ref.se, ch.se)) << j;
  }
}

TEST(RunChain, StatesStayInParameterSetAndMeanIsExact) {
  const std::size_t T = 256;
  const auto x = test_path(T, 4);
  const auto cfg = chain_config(T, 3000, learning_rate(T), 5, PriorKind::Exponential);
  std::vector<double> sum(cfg.prior.d_T, 0.0);
  std::size_t count = 0;
  const auto s = run_chain(x, cfg, [&](std::size_t i, std::span<const double> st) {
    EXPECT_EQ(i, count);
    ++count;
    ASSERT_EQ(st.size(), cfg.prior.d_T);
    if (i == 0) {
      for (double v : st) EXPECT_EQ(v, 0.0);
    } else {
      EXPECT_TRUE(is_stable(st, 1.0));
    }
    double l1 = 0.0;
    for (double v : st) l1 += std::abs(v);
    EXPECT_LE(l1, cfg.prior.radius + 1e-12);
    for (std::size_t j = 0; j < st.size(); ++j) sum[j] += st[j];
  });
  EXPECT_EQ(count, 3000u);
  EXPECT_LE(s.acceptance_count, 2999u);
  double l1 = 0.0;
  for (std::size_t j = 0; j < sum.size(); ++j) {
    EXPECT_NEAR(s.theta_bar[j], sum[j] / 3000.0, 1e-12);
    l1 += std::abs(s.theta_bar[j]);
  }
  EXPECT_LE(l1, cfg.prior.radius + 1e-12);
}

TEST(RunChain, DeterministicGivenSeed) {
  const auto x = test_path(128, 6);
  const auto a = run_chain(x, chain_config(128, 800, 1.0, 42));
  const auto b = run_chain(x, chain_config(128, 800, 1.0, 42));
  EXPECT_EQ(a.theta_bar, b.theta_bar);
  EXPECT_EQ(a.acceptance_count, b.acceptance_count);
  EXPECT_EQ(a.final_state, b.final_state);
  const auto c = run_chain(x, chain_config(128, 800, 1.0, 43));
  EXPECT_NE(a.theta_bar, c.theta_bar);
}

TEST(RunChain, RejectsBadConfig) {
  const auto x = test_path(64, 1);
  EXPECT_THROW(run_chain(x, chain_config(64, 0, 1.0, 1)), std::invalid_argument);
  EXPECT_THROW(run_chain(x, chain_config(64, 10, -1.0, 1)), std::invalid_argument);
  EXPECT_THROW(run_chain(std::span(x).first(3), chain_config(64, 10, 1.0, 1)),
               std::invalid_argument);
}

TEST(IndependentHastings, TwoPointToyMatchesGibbsWeights) {
  // Same proposal/acceptance rule on a two-state space.
  const double p0 = 0.3, r0 = 0.2, r1 = 0.9, eta = 1.5;
  Rng rng(2718);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int state = 0;
  const int n = 200000;
  std::vector<double> in_zero(n);
  for (int i = 0; i < n; ++i) {
    const int cand = u(rng) < p0 ? 0 : 1;
    const double rc = state ? r1 : r0, rn = cand ? r1 : r0;
    if (u(rng) <= acceptance_ratio(eta, rc, rn)) state = cand;
    in_zero[i] = state == 0;
  }
  const double w0 = p0 * std::exp(-eta * r0), w1 = (1 - p0) * std::exp(-eta * r1);
  const auto est = oracle::batch_means(in_zero, 100);
  EXPECT_NEAR(est.mean, w0 / (w0 + w1), 3 * est.se);
}

TEST(GibbsWeights, ShiftInvarianceAndUnderflow) {
  const std::vector<double> r{0.5, 1.0, 2.0, 0.7};
  const auto a = gibbs_weights(r, 3.0);
  std::vector<double> shifted = r;
  for (auto& v : shifted) v += 1000.0;
  const auto b = gibbs_weights(shifted, 3.0);
  for (std::size_t i = 0; i < r.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);

  const std::vector<double> inf(3, std::numeric_limits<double>::infinity());
  EXPECT_THROW(gibbs_weights(inf, 1.0), NumericalFailure);
  EXPECT_THROW(gibbs_weights(std::vector<double>{}, 1.0), std::invalid_argument);
}

TEST(GibbsMeanOracle, ZeroEtaIsPlainPriorMean) {
  const auto x = test_path(64, 8);
  const auto prior = PriorSpec::make(PriorKind::InverseSquare, 64, 1.0);
  Rng a(99), b(99);
  const auto est = gibbs_mean_oracle(x, prior, 0.0, 2000, a);
  std::vector<double> mean(prior.d_T, 0.0);
  for (int i = 0; i < 2000; ++i) {
    const auto th = sample_prior(prior, b);
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += th[j] / 2000.0;
  }
  for (std::size_t j = 0; j < mean.size(); ++j) EXPECT_NEAR(est.mean[j], mean[j], 1e-12);
  EXPECT_NEAR(est.effective_sample_size, 2000.0, 1e-6);
}

TEST(GibbsMeanOracle, AgreesWithChainOnSmallProblem) {
  const std::size_t T = 32;
  const auto x = test_path(T, 10);
  const auto cfg = chain_config(T, 40000, learning_rate(T), 11);
  std::vector<std::vector<double>> per_coord(cfg.prior.d_T);
  const auto s = run_chain(x, cfg, [&](std::size_t, std::span<const double> st) {
    for (std::size_t j = 0; j < st.size(); ++j) per_coord[j].push_back(st[j]);
  });
  Rng rng(12);
  const auto est = gibbs_mean_oracle(x, cfg.prior, cfg.eta, 40000, rng);
  for (std::size_t j = 0; j < cfg.prior.d_T; ++j) {
    const auto bm = oracle::batch_means(per_coord[j]);
    EXPECT_NEAR(s.theta_bar[j], est.mean[j], 3 * std::hypot(bm.se, est.std_error[j])) << j;
  }
}

// Command-line front end. Talks to the library only through gibbsar.h.
//
// Exit codes: 0 success, 1 usage error, 2 runtime error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gibbsar/gibbsar.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct RuntimeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(gibbsar_status status, const std::string& context) {
  if (status != GIBBSAR_OK)
    throw RuntimeFailure(context + ": " + gibbsar_status_name(status) + ": " +
                         gibbsar_last_error());
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw CLI::ValidationError("bad number in list: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("empty list");
  return out;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Accepts `t,x` rows with an optional header, or one value per line.
std::vector<double> read_path_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RuntimeFailure(path + ": cannot open");
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.rfind(',');
    const std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
    try {
      std::size_t used = 0;
      const double v = std::stod(field, &used);
      values.push_back(v);
    } catch (const std::exception&) {
      if (values.empty()) continue;  // header
      throw RuntimeFailure(path + ": bad value '" + field + "'");
    }
  }
  return values;
}

struct SimulateArgs {
  std::string theta;
  std::size_t d = 8;
  double delta = 0.75;
  double sigma = 1.0;
  std::size_t T = 4096;
};

int run_simulate(const SimulateArgs& a, std::uint64_t seed, const std::string& out) {
  std::vector<double> theta;
  if (!a.theta.empty()) {
    theta = parse_list(a.theta);
  } else {
    theta.resize(a.d);
    check(gibbsar_sample_true_theta(a.d, a.delta, seed ^ 0x7468657461ULL, theta.data()),
          "sample theta");
  }
  std::vector<double> path(a.T);
  check(gibbsar_simulate(theta.data(), theta.size(), a.sigma, a.T, seed, path.data()),
        "simulate");

  std::ofstream file;
  if (!out.empty()) {
    file.open(out, std::ios::binary | std::ios::trunc);
    if (!file) throw RuntimeFailure(out + ": cannot open for writing");
  }
  std::ostream& os = out.empty() ? std::cout : file;
  os << "# theta=";
  for (std::size_t j = 0; j < theta.size(); ++j) os << (j ? ";" : "") << fmt(theta[j]);
  os << " sigma=" << fmt(a.sigma) << " seed=" << seed << "\n";
  os << "t,x\n";
  for (std::size_t t = 0; t < path.size(); ++t) os << (t + 1) << ',' << fmt(path[t]) << '\n';
  if (!os) throw RuntimeFailure("write failed");
  return kExitOk;
}

struct FitArgs {
  std::string path;
  std::string prior = "inverse_square";
  std::size_t n_star = 1000;
  double gamma = 1.0;
  std::optional<double> eta;
  std::string theta_true;
  double sigma = 1.0;
};

int run_fit(const FitArgs& a, std::uint64_t seed) {
  const auto x = read_path_csv(a.path);
  gibbsar_chain_options opts;
  gibbsar_chain_options_init(&opts);
  check(gibbsar_parse_prior_kind(a.prior.c_str(), &opts.prior), "prior");
  opts.n_star = a.n_star;
  opts.gamma = a.gamma;
  opts.eta = a.eta.value_or(-1.0);
  opts.seed = seed;

  gibbsar_chain_result* chain = nullptr;
  check(gibbsar_run_chain(x.data(), x.size(), &opts, &chain), "run chain");
  std::unique_ptr<gibbsar_chain_result, decltype(&gibbsar_chain_free)> guard(chain,
                                                                              &gibbsar_chain_free);
  std::vector<double> theta_bar(gibbsar_chain_dim(chain));
  std::size_t len = 0;
  check(gibbsar_chain_theta_bar(chain, theta_bar.data(), theta_bar.size(), &len), "theta_bar");

  double emp = 0.0;
  check(gibbsar_empirical_risk(theta_bar.data(), theta_bar.size(), x.data(), x.size(), &emp),
        "empirical risk");

  std::cout << "T = " << x.size() << "\n"
            << "d_T = " << theta_bar.size() << "\n"
            << "eta = " << fmt(gibbsar_chain_eta(chain)) << "\n"
            << "n_star = " << a.n_star << "\n"
            << "acceptance_rate = " << fmt(gibbsar_chain_acceptance_rate(chain)) << "\n"
            << "theta_bar =";
  for (double v : theta_bar) std::cout << ' ' << fmt(v);
  std::cout << "\nempirical_risk = " << fmt(emp) << "\n";

  if (!a.theta_true.empty()) {
    const auto truth = parse_list(a.theta_true);
    double risk = 0.0;
    check(gibbsar_exact_risk(truth.data(), truth.size(), a.sigma, theta_bar.data(),
                             theta_bar.size(), &risk),
          "exact risk");
    std::cout << "exact_risk = " << fmt(risk) << "\n"
              << "excess_risk = " << fmt(risk - std::sqrt(2.0 / M_PI) * a.sigma * a.sigma)
              << "\n";
  }
  return kExitOk;
}

struct ExperimentArgs {
  std::optional<std::size_t> replicates;
  std::optional<std::size_t> threads;
};

int run_experiment(const ExperimentArgs& a, const std::string& config_path,
                   std::optional<std::uint64_t> seed, const std::string& out_dir) {
  gibbsar_config* cfg = nullptr;
  if (config_path.empty())
    check(gibbsar_config_default(&cfg), "config");
  else
    check(gibbsar_config_load(config_path.c_str(), &cfg), "config " + config_path);
  std::unique_ptr<gibbsar_config, decltype(&gibbsar_config_free)> cfg_guard(cfg,
                                                                            &gibbsar_config_free);
  if (seed) check(gibbsar_config_set(cfg, "master_seed", std::to_string(*seed).c_str()), "--seed");
  if (!out_dir.empty())
    check(gibbsar_config_set(cfg, "output_dir", ("\"" + out_dir + "\"").c_str()), "--out");
  if (a.replicates)
    check(gibbsar_config_set(cfg, "replicates", std::to_string(*a.replicates).c_str()),
          "--replicates");
  if (a.threads)
    check(gibbsar_config_set(cfg, "threads", std::to_string(*a.threads).c_str()), "--threads");

  const std::filesystem::path dir = gibbsar_config_output_dir(cfg);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw RuntimeFailure(dir.string() + ": " + ec.message());

  gibbsar_results* res = nullptr;
  check(gibbsar_experiment_run(cfg, &res), "experiment");
  std::unique_ptr<gibbsar_results, decltype(&gibbsar_results_free)> res_guard(
      res, &gibbsar_results_free);

  const double q = gibbsar_config_quantile(cfg);
  const auto csv = (dir / "results.csv").string();
  const auto svg = (dir / "figure.svg").string();
  check(gibbsar_results_write_csv(res, csv.c_str()), "write csv");
  check(gibbsar_results_write_plot(res, q, svg.c_str()), "write plot");

  std::vector<double> theta(64);
  std::size_t len = 0;
  check(gibbsar_results_true_theta(res, theta.data(), theta.size(), &len), "true theta");
  std::cout << "true theta:";
  for (std::size_t j = 0; j < len; ++j) std::cout << ' ' << fmt(theta[j]);
  std::cout << "\nrows: " << gibbsar_results_row_count(res) << "\n";

  std::size_t curves = 0;
  check(gibbsar_results_curve_count(res, q, &curves), "curves");
  std::cout << q << "-quantile of excess risk\n";
  for (std::size_t c = 0; c < curves; ++c) {
    gibbsar_prior_kind prior{};
    std::size_t n_star = 0, n = 0;
    std::vector<std::size_t> T(64);
    std::vector<double> v(64);
    check(gibbsar_results_curve(res, q, c, &prior, &n_star, T.data(), v.data(), T.size(), &n),
          "curve");
    std::cout << (prior == GIBBSAR_PRIOR_INVERSE_SQUARE ? "inverse_square" : "exponential")
              << " n*=" << n_star << ":";
    for (std::size_t i = 0; i < n; ++i) std::cout << "  T=" << T[i] << " " << fmt(v[i]);
    std::cout << "\n";
  }
  std::cout << "wrote " << csv << "\nwrote " << svg << "\n";
  return kExitOk;
}

struct BoundsArgs {
  std::size_t T = 4096;
  double epsilon = 0.1;
  double gamma = 1.0;
  gibbsar_bound_constants c{1.0, 1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0, 4.0 / 3.0, 0.1};
  std::optional<double> phi;
  double A_eta = 1.0;
  double inf_risk = 0.0;
};

int run_bounds(BoundsArgs a) {
  a.c.epsilon = a.epsilon;
  if (a.phi) {
    a.c.phi_A = *a.phi;
  } else {
    check(gibbsar_gaussian_abs_exp_moment(a.c.A_star, &a.c.phi_A), "phi");
  }
  double eta = 0.0, E = 0.0, bound = 0.0, M = 0.0, M_star = 0.0;
  std::size_t d_T = 0;
  check(gibbsar_learning_rate(a.T, &eta), "eta_T");
  check(gibbsar_effective_dim(a.T, a.gamma, &d_T), "d_T");
  check(gibbsar_oracle_constant(&a.c, &E), "E");
  check(gibbsar_oracle_risk_bound(a.T, a.epsilon, E, a.inf_risk, &bound), "bound");
  check(gibbsar_mcmc_budget(a.T, a.epsilon, a.A_eta, &M), "M");
  check(gibbsar_ar_budget(a.T, a.epsilon, a.c.gamma0, &M_star), "M*");
  std::cout << "T = " << a.T << "\n"
            << "epsilon = " << fmt(a.epsilon) << "\n"
            << "eta_T = " << fmt(eta) << "\n"
            << "d_T = " << d_T << "\n"
            << "phi(A*) = " << fmt(a.c.phi_A) << "\n"
            << "E = " << fmt(E) << "\n"
            << "oracle_bound = " << fmt(bound) << "\n"
            << "M(T,eps) = " << fmt(M) << "\n"
            << "M*(T,eps) = " << (std::isinf(M_star) ? std::string("inf") : fmt(M_star)) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gibbs aggregation forecasting for autoregressive processes"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::string out;
  app.add_option("--seed", seed, "random seed (experiment: master seed)");
  app.add_option("--config", config_path, "experiment config file");
  app.add_option("--out", out, "output file (simulate) or directory (experiment)");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "simulate a stationary AR path to CSV");
  simulate->add_option("--theta", sim.theta, "comma-separated coefficients (default: draw)");
  simulate->add_option("--d", sim.d, "order when theta is drawn")->check(CLI::PositiveNumber);
  simulate->add_option("--delta", sim.delta, "stability margin when theta is drawn");
  simulate->add_option("--sigma", sim.sigma, "innovation standard deviation");
  simulate->add_option("--T", sim.T, "path length")->check(CLI::PositiveNumber);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "run one chain on a path and report theta_bar");
  fit_cmd->add_option("--path", fit.path, "CSV produced by simulate")->required();
  fit_cmd->add_option("--prior", fit.prior, "inverse_square | exponential");
  fit_cmd->add_option("--nstar", fit.n_star, "chain length")->check(CLI::PositiveNumber);
  fit_cmd->add_option("--gamma", fit.gamma, "d_T = floor(ln(T)^gamma)");
  fit_cmd->add_option("--eta", fit.eta, "learning rate (default sqrt(T)/(4 ln T))");
  fit_cmd->add_option("--theta-true", fit.theta_true, "true coefficients for the exact risk");
  fit_cmd->add_option("--sigma", fit.sigma, "true innovation standard deviation");

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "run the quantile-risk experiment");
  exp_cmd->add_option("--replicates", exp.replicates, "override replicates");
  exp_cmd->add_option("--threads", exp.threads, "override worker threads");

  BoundsArgs b;
  auto* bounds = app.add_subcommand("bounds", "print the theoretical constants and budgets");
  bounds->add_option("--T", b.T, "sample size (>= 4)");
  bounds->add_option("--epsilon", b.epsilon, "confidence level");
  bounds->add_option("--gamma", b.gamma, "d_T exponent");
  bounds->add_option("--K", b.c.K, "loss Lipschitz constant");
  bounds->add_option("--A-star", b.c.A_star, "sum of Lipschitz coefficients");
  bounds->add_option("--A-tilde", b.c.A_tilde, "sum of j times Lipschitz coefficients");
  bounds->add_option("--phi", b.phi, "E exp(A*|xi|) (default: Gaussian value)");
  bounds->add_option("--D", b.c.D_lip, "predictor Lipschitz constant");
  bounds->add_option("--C1", b.c.C1, "prior constant C1");
  bounds->add_option("--C2", b.c.C2, "prior constant C2");
  bounds->add_option("--C3", b.c.C3, "prior constant C3");
  bounds->add_option("--gamma0", b.c.gamma0, "process variance");
  bounds->add_option("--A", b.A_eta, "A_{eta,T} for the MCMC budget");
  bounds->add_option("--inf-risk", b.inf_risk, "best risk in the class");

  // Global flags are accepted after the subcommand name too.
  for (auto* sub : {simulate, fit_cmd, exp_cmd, bounds}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (*simulate) return run_simulate(sim, seed.value_or(1), out);
    if (*fit_cmd) return run_fit(fit, seed.value_or(1));
    if (*exp_cmd) return run_experiment(exp, config_path, seed, out);
    if (*bounds) return run_bounds(b);
  } catch (const RuntimeFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  std::cerr << app.help();
  return kExitUsage;
}

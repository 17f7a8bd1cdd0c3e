#include "gibbsar/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "gibbsar/errors.hpp"
#include "gibbsar/gibbs_mcmc.hpp"
#include "gibbsar/risk.hpp"
#include "gibbsar/timeseries.hpp"

namespace gibbsar {

namespace {

enum StreamTag : std::uint64_t { kTrueTheta = 1, kPath = 2, kChain = 3 };

struct Task {
  std::size_t prior_index;
  std::size_t replicate;
  std::size_t T;
  std::size_t n_star;
};

auto row_key(const ResultRow& r) {
  return std::make_tuple(static_cast<int>(r.prior), r.T, r.n_star, r.replicate);
}

// Runs fn(i) for i in [0, count) on `threads` workers. Rethrows the first
// exception after all workers have joined.
template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
      }
    }
  };
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::uint64_t true_theta_seed(std::uint64_t master) { return derive_seed(master, {kTrueTheta}); }

std::uint64_t path_seed(std::uint64_t master, std::size_t replicate, std::size_t T) {
  return derive_seed(master, {kPath, replicate, T});
}

std::uint64_t chain_seed(std::uint64_t master, PriorKind prior, std::size_t replicate,
                         std::size_t T, std::size_t n_star) {
  return derive_seed(master, {kChain, static_cast<std::uint64_t>(prior), replicate, T, n_star});
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const ExperimentObserver& observer) {
  config.validate();

  ExperimentResult result;
  if (config.theta) {
    result.true_theta = *config.theta;
    if (!is_stable(result.true_theta, 1.0))
      throw std::domain_error("config: pinned theta is not stable");
  } else {
    Rng rng(true_theta_seed(config.master_seed));
    result.true_theta = sample_true_theta(config.d, config.delta, rng);
  }
  const ArParams truth(result.true_theta, config.sigma);

  const std::size_t max_T = config.T_grid.back();
  const std::size_t threads =
      config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());

  // Paths: one per replicate (prefixes shared across T), or one per
  // (replicate, T) when independent_paths is set. The shared path uses T = 0
  // in its stream key.
  const std::size_t paths_per_rep = config.independent_paths ? config.T_grid.size() : 1;
  std::vector<Path> paths(config.replicates * paths_per_rep);
  parallel_for(paths.size(), threads, [&](std::size_t i) {
    const std::size_t rep = i / paths_per_rep;
    const std::size_t T = config.independent_paths ? config.T_grid[i % paths_per_rep] : 0;
    Rng rng(path_seed(config.master_seed, rep, T));
    paths[i] = simulate_stationary(truth, T == 0 ? max_T : T, rng);
  });
  auto path_for = [&](std::size_t rep, std::size_t t_index, std::size_t T) {
    const auto& p = paths[rep * paths_per_rep + (config.independent_paths ? t_index : 0)];
    return std::span<const double>(p.values).first(T);
  };

  // Risk oracles and priors per T, shared read-only by the workers.
  std::vector<RiskOracle> oracles;
  std::vector<std::vector<PriorSpec>> priors(config.prior_kind.size());
  for (std::size_t ti = 0; ti < config.T_grid.size(); ++ti) {
    const std::size_t T = config.T_grid[ti];
    const std::size_t d_T = effective_dim(T, config.gamma);
    oracles.emplace_back(truth, d_T);
    for (std::size_t p = 0; p < config.prior_kind.size(); ++p)
      priors[p].push_back(PriorSpec::make(config.prior_kind[p], T, config.gamma));
  }

  std::vector<Task> tasks;
  for (std::size_t p = 0; p < config.prior_kind.size(); ++p)
    for (std::size_t T : config.T_grid)
      for (std::size_t n : config.n_star_grid)
        for (std::size_t rep = 0; rep < config.replicates; ++rep) tasks.push_back({p, rep, T, n});

  result.rows.resize(tasks.size());
  parallel_for(tasks.size(), threads, [&](std::size_t i) {
    const Task& task = tasks[i];
    const std::size_t ti = static_cast<std::size_t>(
        std::find(config.T_grid.begin(), config.T_grid.end(), task.T) - config.T_grid.begin());
    const PriorKind kind = config.prior_kind[task.prior_index];

    ChainConfig chain;
    chain.eta = learning_rate(task.T);
    chain.n_star = task.n_star;
    chain.prior = priors[task.prior_index][ti];
    chain.seed = chain_seed(config.master_seed, kind, task.replicate, task.T, task.n_star);

    StateObserver state_hook;
    if (observer) {
      const ChainContext ctx{kind, task.T, chain.prior.d_T, chain.prior.radius, task.n_star,
                             task.replicate};
      state_hook = [&observer, ctx](std::size_t idx, std::span<const double> s) {
        observer(ctx, idx, s);
      };
    }
    const auto summary = run_chain(path_for(task.replicate, ti, task.T), chain, state_hook);

    ResultRow& row = result.rows[i];
    row.prior = kind;
    row.T = task.T;
    row.n_star = task.n_star;
    row.replicate = task.replicate;
    row.seed = chain.seed;
    row.risk = exact_risk(summary.theta_bar, oracles[ti]);
    row.excess_risk = excess_risk(row.risk, config.sigma);
    row.acceptance_rate = summary.acceptance_rate();
    row.theta_bar = summary.theta_bar;
  });

  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const ResultRow& a, const ResultRow& b) { return row_key(a) < row_key(b); });
  return result;
}

double quantile(std::span<const double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty list");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile level must lie in (0, 1)");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  // q N is rounded to 1e-9 so representation error in q cannot bump the rank.
  const double qn = std::round(q * n * 1e9) / 1e9;
  auto rank = static_cast<std::size_t>(std::ceil(qn));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

std::vector<QuantileCurve> quantile_curves(std::span<const ResultRow> rows, double q) {
  std::vector<const ResultRow*> sorted;
  sorted.reserve(rows.size());
  for (const auto& r : rows) sorted.push_back(&r);
  auto key = [](const ResultRow* r) {
    return std::make_tuple(static_cast<int>(r->prior), r->n_star, r->T, r->replicate);
  };
  std::sort(sorted.begin(), sorted.end(),
            [&](const ResultRow* a, const ResultRow* b) { return key(a) < key(b); });

  std::vector<QuantileCurve> curves;
  std::size_t i = 0;
  while (i < sorted.size()) {
    QuantileCurve curve{sorted[i]->prior, sorted[i]->n_star, {}, {}};
    auto same_curve = [&](std::size_t k) {
      return k < sorted.size() && sorted[k]->prior == curve.prior && sorted[k]->n_star == curve.n_star;
    };
    while (same_curve(i)) {
      const std::size_t T = sorted[i]->T;
      std::vector<double> bucket;
      while (same_curve(i) && sorted[i]->T == T) bucket.push_back(sorted[i++]->excess_risk);
      curve.T.push_back(T);
      curve.value.push_back(quantile(bucket, q));
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

double log_log_slope(std::span<const double> T, std::span<const double> value) {
  if (T.size() != value.size() || T.size() < 2)
    throw std::invalid_argument("log_log_slope needs two or more matching points");
  double mx = 0.0, my = 0.0;
  const auto n = static_cast<double>(T.size());
  for (std::size_t i = 0; i < T.size(); ++i) {
    if (!(T[i] > 0.0 && value[i] > 0.0))
      throw std::invalid_argument("log_log_slope needs positive coordinates");
    mx += std::log(T[i]);
    my += std::log(value[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < T.size(); ++i) {
    const double dx = std::log(T[i]) - mx;
    sxy += dx * (std::log(value[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw std::invalid_argument("log_log_slope needs distinct T values");
  return sxy / sxx;
}

double reference_rate(double T) {
  const double lt = std::log(T);
  return lt * lt * lt / std::sqrt(T);
}

double reference_anchor_scale(double T0, double y0) { return y0 / reference_rate(T0); }

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

void write_csv(std::span<const ResultRow> rows, std::ostream& out) {
  std::vector<const ResultRow*> order;
  order.reserve(rows.size());
  for (const auto& r : rows) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(),
                   [](const ResultRow* a, const ResultRow* b) { return row_key(*a) < row_key(*b); });

  out << kCsvHeader << '\n';
  for (const ResultRow* r : order) {
    out << to_string(r->prior) << ',' << r->T << ',' << r->n_star << ',' << r->replicate << ','
        << r->seed << ',' << format_double(r->risk) << ',' << format_double(r->excess_risk) << ','
        << format_double(r->acceptance_rate) << ',';
    for (std::size_t j = 0; j < r->theta_bar.size(); ++j) {
      if (j) out << ';';
      out << format_double(r->theta_bar[j]);
    }
    out << '\n';
  }
}

void emit_csv(std::span<const ResultRow> rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  write_csv(rows, out);
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

namespace {

template <class T>
T parse_number(std::string_view s, std::size_t line_no) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("csv line " + std::to_string(line_no) + ": bad number '" +
                                std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

}  // namespace

std::vector<ResultRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::invalid_argument("csv: missing or unexpected header");
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 9)
      throw std::invalid_argument("csv line " + std::to_string(line_no) + ": expected 9 fields");
    ResultRow r;
    r.prior = parse_prior_kind(f[0]);
    r.T = parse_number<std::size_t>(f[1], line_no);
    r.n_star = parse_number<std::size_t>(f[2], line_no);
    r.replicate = parse_number<std::size_t>(f[3], line_no);
    r.seed = parse_number<std::uint64_t>(f[4], line_no);
    r.risk = parse_number<double>(f[5], line_no);
    r.excess_risk = parse_number<double>(f[6], line_no);
    r.acceptance_rate = parse_number<double>(f[7], line_no);
    if (!f[8].empty())
      for (auto item : split(f[8], ';')) r.theta_bar.push_back(parse_number<double>(item, line_no));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  return parse_csv(in);
}

}  // namespace gibbsar

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gibbsar/stable_domain.hpp"

namespace gibbsar {

struct ExperimentConfig {
  std::size_t d = 8;
  double delta = 0.75;
  double sigma = 1.0;
  std::vector<std::size_t> T_grid{64, 128, 256, 512, 1024, 2048, 4096};
  std::vector<std::size_t> n_star_grid{100, 1000};
  std::size_t replicates = 100;
  std::vector<PriorKind> prior_kind{PriorKind::InverseSquare, PriorKind::Exponential};
  double gamma = 1.0;
  double quantile_q = 0.9;
  std::uint64_t master_seed = 20130101;
  std::string output_dir = "out";
  /// false: one path of length max(T_grid) per replicate, prefixes reused.
  bool independent_paths = false;
  /// Pins the true coefficients instead of drawing them from s_d(delta).
  std::optional<std::vector<double>> theta;
  /// Worker threads; 0 selects std::thread::hardware_concurrency().
  std::size_t threads = 0;

  void validate() const;
};

/// Flat `key = value` text (TOML subset: numbers, booleans, quoted strings,
/// one-line arrays, `#` comments). Keys are the ExperimentConfig field names.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);
/// Applies one `key = value` entry; does not validate the whole config.
void apply_config_entry(ExperimentConfig& cfg, std::string_view key, std::string_view value);

struct ResultRow {
  PriorKind prior = PriorKind::InverseSquare;
  std::size_t T = 0;
  std::size_t n_star = 0;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  std::vector<double> theta_bar;
  double risk = 0.0;
  double excess_risk = 0.0;
  double acceptance_rate = 0.0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct ExperimentResult {
  std::vector<double> true_theta;
  std::vector<ResultRow> rows;  // sorted by (prior, T, n_star, replicate)
};

/// Identifies the chain an observed state belongs to.
struct ChainContext {
  PriorKind prior;
  std::size_t T;
  std::size_t d_T;
  double radius;
  std::size_t n_star;
  std::size_t replicate;
};

/// Invoked for every chain state from worker threads; must be thread-safe.
using ExperimentObserver =
    std::function<void(const ChainContext&, std::size_t index, std::span<const double> state)>;

/// Seeds of the experiment's random streams.
std::uint64_t true_theta_seed(std::uint64_t master);
std::uint64_t path_seed(std::uint64_t master, std::size_t replicate, std::size_t T);
std::uint64_t chain_seed(std::uint64_t master, PriorKind prior, std::size_t replicate,
                         std::size_t T, std::size_t n_star);

/// Full quantile-risk experiment. Deterministic given the config.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const ExperimentObserver& observer = {});

/// Type-1 empirical quantile: the ceil(q N)-th smallest value.
double quantile(std::span<const double> values, double q);

struct QuantileCurve {
  PriorKind prior;
  std::size_t n_star;
  std::vector<std::size_t> T;
  std::vector<double> value;  // q-quantile of excess risk at each T
};

/// One curve per (prior, n_star), T ascending.
std::vector<QuantileCurve> quantile_curves(std::span<const ResultRow> rows, double q);

/// Least-squares slope of log(value) against log(T).
double log_log_slope(std::span<const double> T, std::span<const double> value);

/// (ln T)^3 / sqrt(T).
double reference_rate(double T);

inline constexpr std::string_view kCsvHeader =
    "prior,T,nstar,replicate,seed,risk,excess_risk,acceptance_rate,theta_bar";

void write_csv(std::span<const ResultRow> rows, std::ostream& out);
/// Writes rows sorted by (prior, T, n_star, replicate). Throws IoError.
void emit_csv(std::span<const ResultRow> rows, const std::string& path);
std::vector<ResultRow> parse_csv(std::istream& in);
std::vector<ResultRow> read_csv(const std::string& path);

/// Log-log SVG of the quantile curves, one panel per prior, solid lines for
/// the smallest n_star, dashed for the others, and a dotted (ln T)^3/sqrt(T)
/// reference scaled through each panel's first point. Throws IoError.
void emit_plot(std::span<const ResultRow> rows, double q, const std::string& path);
std::string render_plot_svg(std::span<const ResultRow> rows, double q);

/// Reference curve scale c such that c * reference_rate(T0) = y0.
double reference_anchor_scale(double T0, double y0);

/// Decimal with 17 significant digits.
std::string format_double(double x);

}  // namespace gibbsar

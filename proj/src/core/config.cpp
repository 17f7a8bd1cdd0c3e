#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gibbsar/errors.hpp"
#include "gibbsar/harness.hpp"

namespace gibbsar {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw std::invalid_argument("config: bad value for '" + std::string(key) + "': " +
                              std::string(value));
}

double to_double(std::string_view key, std::string_view v) {
  v = trim(v);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v);
  return out;
}

std::uint64_t to_uint(std::string_view key, std::string_view v) {
  v = trim(v);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v);
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "true") return true;
  if (v == "false") return false;
  bad_value(key, v);
}

std::string to_string_value(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return std::string(v.substr(1, v.size() - 2));
  if (v.empty() || v.find_first_of("\"[]=,") != std::string_view::npos) bad_value(key, v);
  return std::string(v);
}

// A scalar is accepted where a one-element array is expected.
std::vector<std::string_view> to_items(std::string_view key, std::string_view v) {
  v = trim(v);
  std::vector<std::string_view> items;
  if (v.empty()) bad_value(key, v);
  if (v.front() != '[') {
    items.push_back(v);
    return items;
  }
  if (v.back() != ']') bad_value(key, v);
  v = trim(v.substr(1, v.size() - 2));
  while (!v.empty()) {
    const auto comma = v.find(',');
    const auto item = trim(v.substr(0, comma));
    if (!item.empty()) items.push_back(item);
    else if (comma != std::string_view::npos) bad_value(key, v);
    if (comma == std::string_view::npos) break;
    v = trim(v.substr(comma + 1));
  }
  return items;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (d < 1) throw std::invalid_argument("config: d must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("config: delta must lie in (0, 1)");
  if (!(sigma > 0.0)) throw std::invalid_argument("config: sigma must be positive");
  if (T_grid.empty()) throw std::invalid_argument("config: T_grid is empty");
  for (auto T : T_grid)
    if (T < 4) throw std::invalid_argument("config: every T must be >= 4");
  if (n_star_grid.empty()) throw std::invalid_argument("config: n_star_grid is empty");
  for (auto n : n_star_grid)
    if (n < 1) throw std::invalid_argument("config: every n_star must be >= 1");
  if (replicates < 1) throw std::invalid_argument("config: replicates must be >= 1");
  if (prior_kind.empty()) throw std::invalid_argument("config: prior_kind is empty");
  if (!(gamma >= 1.0)) throw std::invalid_argument("config: gamma must be >= 1");
  if (!(quantile_q > 0.0 && quantile_q < 1.0))
    throw std::invalid_argument("config: quantile_q must lie in (0, 1)");
  if (theta && theta->size() != d)
    throw std::invalid_argument("config: theta must have d entries");
}

void apply_config_entry(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "d") {
    cfg.d = to_uint(key, value);
  } else if (key == "delta") {
    cfg.delta = to_double(key, value);
  } else if (key == "sigma") {
    cfg.sigma = to_double(key, value);
  } else if (key == "T_grid") {
    cfg.T_grid.clear();
    for (auto item : to_items(key, value)) cfg.T_grid.push_back(to_uint(key, item));
  } else if (key == "n_star_grid") {
    cfg.n_star_grid.clear();
    for (auto item : to_items(key, value)) cfg.n_star_grid.push_back(to_uint(key, item));
  } else if (key == "replicates") {
    cfg.replicates = to_uint(key, value);
  } else if (key == "prior_kind") {
    cfg.prior_kind.clear();
    for (auto item : to_items(key, value))
      cfg.prior_kind.push_back(parse_prior_kind(to_string_value(key, item)));
  } else if (key == "gamma") {
    cfg.gamma = to_double(key, value);
  } else if (key == "quantile_q") {
    cfg.quantile_q = to_double(key, value);
  } else if (key == "master_seed") {
    cfg.master_seed = to_uint(key, value);
  } else if (key == "output_dir") {
    cfg.output_dir = to_string_value(key, value);
  } else if (key == "independent_paths") {
    cfg.independent_paths = to_bool(key, value);
  } else if (key == "theta") {
    std::vector<double> theta;
    for (auto item : to_items(key, value)) theta.push_back(to_double(key, item));
    cfg.theta = std::move(theta);
  } else if (key == "threads") {
    cfg.threads = to_uint(key, value);
  } else {
    throw std::invalid_argument("config: unknown key '" + std::string(key) + "'");
  }
  for (auto* grid : {&cfg.T_grid, &cfg.n_star_grid}) {
    std::sort(grid->begin(), grid->end());
    grid->erase(std::unique(grid->begin(), grid->end()), grid->end());
  }
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config: line " + std::to_string(line_no) + " is not key = value");
    apply_config_entry(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace gibbsar

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gibbsar/errors.hpp"
#include "gibbsar/harness.hpp"

namespace gibbsar {

namespace {

constexpr double kPanelW = 420.0;
constexpr double kPanelH = 320.0;
constexpr double kMarginL = 70.0;
constexpr double kMarginR = 20.0;
constexpr double kMarginT = 40.0;
constexpr double kMarginB = 90.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

struct Axis {
  double lo, hi;  // log10 range
  double map(double v, double px0, double px1) const {
    return px0 + (std::log10(v) - lo) / (hi - lo) * (px1 - px0);
  }
};

Axis padded_axis(double vmin, double vmax) {
  double lo = std::log10(vmin), hi = std::log10(vmax);
  if (hi - lo < 1e-9) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::string dash_for(std::size_t rank) {
  if (rank == 0) return "";
  return rank == 1 ? "8,5" : "14,4,3,4";
}

}  // namespace

std::string render_plot_svg(std::span<const ResultRow> rows, double q) {
  if (rows.empty()) throw std::invalid_argument("emit_plot: no rows");
  const auto curves = quantile_curves(rows, q);

  std::vector<PriorKind> priors;
  std::vector<std::size_t> n_stars;
  for (const auto& c : curves) {
    if (std::find(priors.begin(), priors.end(), c.prior) == priors.end()) priors.push_back(c.prior);
    if (std::find(n_stars.begin(), n_stars.end(), c.n_star) == n_stars.end()) n_stars.push_back(c.n_star);
  }
  std::sort(n_stars.begin(), n_stars.end());

  const double width = static_cast<double>(priors.size()) * (kPanelW + kMarginL + kMarginR);
  const double height = kPanelH + kMarginT + kMarginB;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
      << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" fill=\"white\"/>\n";

  for (std::size_t p = 0; p < priors.size(); ++p) {
    const double x0 = static_cast<double>(p) * (kPanelW + kMarginL + kMarginR) + kMarginL;
    const double x1 = x0 + kPanelW;
    const double y0 = kMarginT + kPanelH;  // bottom
    const double y1 = kMarginT;

    std::vector<const QuantileCurve*> panel;
    for (const auto& c : curves)
      if (c.prior == priors[p]) panel.push_back(&c);

    // Non-positive quantiles cannot be drawn on a log axis and are skipped.
    double tmin = std::numeric_limits<double>::infinity(), tmax = 0.0;
    double vmin = std::numeric_limits<double>::infinity(), vmax = 0.0;
    double anchor_T = 0.0, anchor_v = 0.0;
    for (const auto* c : panel)
      for (std::size_t i = 0; i < c->T.size(); ++i) {
        const auto T = static_cast<double>(c->T[i]);
        tmin = std::min(tmin, T);
        tmax = std::max(tmax, T);
        if (c->value[i] > 0.0) {
          vmin = std::min(vmin, c->value[i]);
          vmax = std::max(vmax, c->value[i]);
          if (anchor_T == 0.0) {
            anchor_T = T;
            anchor_v = c->value[i];
          }
        }
      }
    const bool have_points = anchor_T > 0.0;
    double scale = 0.0;
    std::vector<double> ref_T;
    if (have_points) {
      scale = reference_anchor_scale(anchor_T, anchor_v);
      for (const auto* c : panel)
        for (auto T : c->T)
          if (std::find(ref_T.begin(), ref_T.end(), static_cast<double>(T)) == ref_T.end())
            ref_T.push_back(static_cast<double>(T));
      std::sort(ref_T.begin(), ref_T.end());
      for (double T : ref_T) {
        vmin = std::min(vmin, scale * reference_rate(T));
        vmax = std::max(vmax, scale * reference_rate(T));
      }
    } else {
      vmin = 0.1;
      vmax = 1.0;
    }
    const Axis ax = padded_axis(tmin, tmax);
    const Axis ay = padded_axis(vmin, vmax);

    svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(y1 - 15)
        << "\" text-anchor=\"middle\" font-size=\"13\">prior: " << to_string(priors[p])
        << "</text>\n";
    svg << "<rect x=\"" << num(x0) << "\" y=\"" << num(y1) << "\" width=\"" << num(kPanelW)
        << "\" height=\"" << num(kPanelH) << "\" fill=\"none\" stroke=\"black\"/>\n";

    // x ticks at the grid values of T
    for (const auto* c : panel)
      for (auto T : c->T) {
        const double x = ax.map(static_cast<double>(T), x0, x1);
        svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x)
            << "\" y2=\"" << num(y0 + 5) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << num(x) << "\" y=\"" << num(y0 + 18)
            << "\" text-anchor=\"middle\">" << T << "</text>\n";
      }
    // y ticks at 1, 2, 5 times powers of ten
    for (int e = static_cast<int>(std::floor(ay.lo)); e <= static_cast<int>(std::ceil(ay.hi)); ++e)
      for (double m : {1.0, 2.0, 5.0}) {
        const double v = m * std::pow(10.0, e);
        const double lv = std::log10(v);
        if (lv < ay.lo || lv > ay.hi) continue;
        const double y = ay.map(v, y0, y1);
        svg << "<line x1=\"" << num(x0 - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x0)
            << "\" y2=\"" << num(y) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << num(x0 - 8) << "\" y=\"" << num(y + 4)
            << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
      }
    svg << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(y0 + 36)
        << "\" text-anchor=\"middle\">T</text>\n"
        << "<text transform=\"translate(" << num(x0 - 55) << ',' << num((y0 + y1) / 2)
        << ") rotate(-90)\" text-anchor=\"middle\">" << num(q)
        << "-quantile of excess risk</text>\n";

    // curves
    std::size_t legend_row = 0;
    auto legend = [&](const std::string& label, const std::string& color, const std::string& dash) {
      const double ly = y0 + 52 + 14.0 * static_cast<double>(legend_row % 3);
      const double lx = x0 + 150.0 * static_cast<double>(legend_row / 3);
      svg << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 30)
          << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"";
      if (!dash.empty()) svg << " stroke-dasharray=\"" << dash << '"';
      svg << "/>\n<text x=\"" << num(lx + 36) << "\" y=\"" << num(ly + 4) << "\">" << label
          << "</text>\n";
      ++legend_row;
    };

    for (std::size_t ci = 0; ci < panel.size(); ++ci) {
      const auto* c = panel[ci];
      const std::size_t rank = static_cast<std::size_t>(
          std::find(n_stars.begin(), n_stars.end(), c->n_star) - n_stars.begin());
      const std::string color = kColors[rank % std::size(kColors)];
      const std::string dash = dash_for(rank);
      std::ostringstream pts;
      std::size_t drawn = 0;
      for (std::size_t i = 0; i < c->T.size(); ++i) {
        if (!(c->value[i] > 0.0)) continue;
        const double x = ax.map(static_cast<double>(c->T[i]), x0, x1);
        const double y = ay.map(c->value[i], y0, y1);
        pts << (drawn++ ? " " : "") << num(x) << ',' << num(y);
        svg << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"2.5\" fill=\""
            << color << "\"/>\n";
      }
      if (drawn > 1) {
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"";
        if (!dash.empty()) svg << " stroke-dasharray=\"" << dash << '"';
        svg << " points=\"" << pts.str() << "\"/>\n";
      }
      legend("n* = " + std::to_string(c->n_star), color, dash);
    }

    if (have_points) {
      std::ostringstream pts;
      for (std::size_t i = 0; i < ref_T.size(); ++i)
        pts << (i ? " " : "") << num(ax.map(ref_T[i], x0, x1)) << ','
            << num(ay.map(scale * reference_rate(ref_T[i]), y0, y1));
      svg << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" "
             "stroke-dasharray=\"2,3\" points=\""
          << pts.str() << "\"/>\n";
      legend("c (ln T)^3 / sqrt(T)", "black", "2,3");
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_plot(std::span<const ResultRow> rows, double q, const std::string& path) {
  const std::string svg = render_plot_svg(rows, q);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out << svg;
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

}  // namespace gibbsar

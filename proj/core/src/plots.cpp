#include "kval/plots.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "kval/config.hpp"
#include "kval/errors.hpp"

namespace kval {

namespace {

struct Frame {
  double x0, x1, y0, y1;         // data range
  double left, top, w, h;        // pixel box

  double px(double x) const { return left + (x - x0) / (x1 - x0) * w; }
  double py(double y) const { return top + h - (y - y0) / (y1 - y0) * h; }
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

std::string settings_comment(const Settings& settings) {
  std::string body = render_settings(settings, "  ");
  for (std::size_t pos = body.find("--"); pos != std::string::npos; pos = body.find("--", pos)) {
    body.replace(pos, 2, "- -");
  }
  return "<!--\n" + body + "-->\n";
}

std::string svg_open(int width, int height) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
         std::to_string(width) + " " + std::to_string(height) + "\">\n";
}

std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel) {
  std::ostringstream s;
  s << "<g id=\"axes\" stroke=\"#333\" fill=\"none\">\n"
    << "<rect x=\"" << num(f.left) << "\" y=\"" << num(f.top) << "\" width=\"" << num(f.w)
    << "\" height=\"" << num(f.h) << "\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = f.x0 + (f.x1 - f.x0) * k / 4.0;
    const double yv = f.y0 + (f.y1 - f.y0) * k / 4.0;
    s << "<line x1=\"" << num(f.px(xv)) << "\" y1=\"" << num(f.top + f.h) << "\" x2=\""
      << num(f.px(xv)) << "\" y2=\"" << num(f.top + f.h + 5) << "\"/>\n"
      << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << num(f.top + f.h + 18)
      << "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#333\" stroke=\"none\">" << num(xv)
      << "</text>\n"
      << "<line x1=\"" << num(f.left - 5) << "\" y1=\"" << num(f.py(yv)) << "\" x2=\""
      << num(f.left) << "\" y2=\"" << num(f.py(yv)) << "\"/>\n"
      << "<text x=\"" << num(f.left - 8) << "\" y=\"" << num(f.py(yv) + 4)
      << "\" font-size=\"11\" text-anchor=\"end\" fill=\"#333\" stroke=\"none\">" << num(yv)
      << "</text>\n";
  }
  s << "<text x=\"" << num(f.left + f.w / 2) << "\" y=\"" << num(f.top + f.h + 36)
    << "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#000\" stroke=\"none\">" << xlabel
    << "</text>\n"
    << "<text x=\"" << num(f.left - 48) << "\" y=\"" << num(f.top + f.h / 2)
    << "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#000\" stroke=\"none\" transform=\"rotate(-90 "
    << num(f.left - 48) << " " << num(f.top + f.h / 2) << ")\">" << ylabel << "</text>\n"
    << "</g>\n";
  return s.str();
}

std::string polyline(const Frame& f, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  std::ostringstream s;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    s << (i == 0 ? "M" : " L") << num(f.px(x(i))) << " " << num(f.py(y(i)));
  }
  return s.str();
}

// Viridis-like ramp on [0, 1].
std::string color_ramp(double t) {
  static constexpr std::array<std::array<double, 3>, 5> kStops = {{{68, 1, 84},
                                                                   {59, 82, 139},
                                                                   {33, 145, 140},
                                                                   {94, 201, 98},
                                                                   {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * (kStops.size() - 1);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(t), kStops.size() - 2);
  const double u = t - static_cast<double>(k);
  char buf[8];
  int rgb[3];
  for (int c = 0; c < 3; ++c) {
    rgb[c] = static_cast<int>(std::lround((1 - u) * kStops[k][c] + u * kStops[k + 1][c]));
  }
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

// Marching squares over the cell-centre lattice of the posterior.
std::string contour_path(const BetaPosterior& post, double level, const Frame& f) {
  const Eigen::MatrixXd& v = post.log_density;
  std::ostringstream s;
  auto lerp = [&](double a0, double b0, double va, double a1, double b1, double vb) {
    const double t = (level - va) / (vb - va);
    return std::array<double, 2>{a0 + t * (a1 - a0), b0 + t * (b1 - b0)};
  };
  for (Eigen::Index i = 0; i + 1 < v.rows(); ++i) {
    for (Eigen::Index j = 0; j + 1 < v.cols(); ++j) {
      const double a0 = post.a_grid(i), a1 = post.a_grid(i + 1);
      const double b0 = post.b_grid(j), b1 = post.b_grid(j + 1);
      const std::array<double, 4> c = {v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)};
      const std::array<std::array<double, 2>, 4> pos = {
          {{a0, b0}, {a1, b0}, {a1, b1}, {a0, b1}}};
      std::vector<std::array<double, 2>> hits;
      for (int e = 0; e < 4; ++e) {
        const int n = (e + 1) % 4;
        if ((c[e] >= level) != (c[n] >= level)) {
          hits.push_back(lerp(pos[e][0], pos[e][1], c[e], pos[n][0], pos[n][1], c[n]));
        }
      }
      for (std::size_t k = 0; k + 1 < hits.size(); k += 2) {
        s << "M" << num(f.px(hits[k][0])) << " " << num(f.py(hits[k][1])) << " L"
          << num(f.px(hits[k + 1][0])) << " " << num(f.py(hits[k + 1][1])) << " ";
      }
    }
  }
  return s.str();
}

}  // namespace

FitBand fit_band(const FittedGP& model, const Eigen::VectorXd& xs) {
  if (model.training_data().dimension() != 1) {
    throw UnsupportedPlotError("fit plots support 1-D inputs only");
  }
  const MarginalPrediction pred = predict_marginal(model, Points(xs));
  FitBand band;
  band.x = xs;
  band.mean = pred.mean;
  const Eigen::VectorXd two_sd = 2.0 * pred.variance.array().sqrt();
  band.lower = pred.mean - two_sd;
  band.upper = pred.mean + two_sd;
  return band;
}

void emit_fit_plot(const FittedGP& model, const Points& truth_grid,
                   const Eigen::VectorXd& truth_values, const Dataset& train, const Dataset& test,
                   const std::filesystem::path& path, const FitPlotOptions& options,
                   const Settings& settings) {
  if (truth_grid.cols() != 1 || train.dimension() != 1 || test.dimension() != 1 ||
      model.training_data().dimension() != 1) {
    throw UnsupportedPlotError("fit plots support 1-D inputs only");
  }
  double x_min = options.x_min;
  double x_max = options.x_max;
  if (std::isnan(x_min) || std::isnan(x_max)) {
    x_min = std::min({truth_grid.minCoeff(), train.inputs.minCoeff(), test.inputs.minCoeff()});
    x_max = std::max({truth_grid.maxCoeff(), train.inputs.maxCoeff(), test.inputs.maxCoeff()});
  }
  if (!(x_max > x_min)) x_max = x_min + 1.0;
  const Eigen::VectorXd xs = Eigen::VectorXd::LinSpaced(std::max(options.samples, 2), x_min, x_max);
  const FitBand band = fit_band(model, xs);

  double y_min = std::min({band.lower.minCoeff(), truth_values.minCoeff(), train.values.minCoeff(),
                           test.values.minCoeff()});
  double y_max = std::max({band.upper.maxCoeff(), truth_values.maxCoeff(), train.values.maxCoeff(),
                           test.values.maxCoeff()});
  const double pad = 0.05 * (y_max - y_min + 1e-12);
  y_min -= pad;
  y_max += pad;
  const Frame f{x_min, x_max, y_min, y_max, 70.0, 30.0, options.width - 200.0, options.height - 80.0};

  std::ostringstream s;
  s << svg_open(options.width, options.height) << settings_comment(settings);
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<defs><clipPath id=\"plot-area\"><rect x=\"" << num(f.left) << "\" y=\"" << num(f.top)
    << "\" width=\"" << num(f.w) << "\" height=\"" << num(f.h) << "\"/></clipPath></defs>\n";

  // Band polygon: upper edge left to right, lower edge right to left.
  std::ostringstream poly;
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    poly << (i == 0 ? "M" : " L") << num(f.px(xs(i))) << " " << num(f.py(band.upper(i)));
  }
  for (Eigen::Index i = xs.size() - 1; i >= 0; --i) {
    poly << " L" << num(f.px(xs(i))) << " " << num(f.py(band.lower(i)));
  }
  s << "<g class=\"series\" id=\"credible-band\" data-label=\"2-sigma credible band\" clip-path=\"url(#plot-area)\">\n"
    << "<path d=\"" << poly.str() << " Z\" fill=\"#7fdbea\" fill-opacity=\"0.45\" stroke=\"none\"/>\n</g>\n";

  Eigen::VectorXd tx = truth_grid.col(0);
  s << "<g class=\"series\" id=\"truth\" data-label=\"truth\" clip-path=\"url(#plot-area)\">\n"
    << "<path d=\"" << polyline(f, tx, truth_values)
    << "\" fill=\"none\" stroke=\"#1f4fbf\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n</g>\n";
  s << "<g class=\"series\" id=\"predictive-mean\" data-label=\"predictive mean\" clip-path=\"url(#plot-area)\">\n"
    << "<path d=\"" << polyline(f, xs, band.mean)
    << "\" fill=\"none\" stroke=\"#0aa6c2\" stroke-width=\"2\"/>\n</g>\n";

  s << "<g class=\"series\" id=\"train\" data-label=\"training data\">\n";
  for (Eigen::Index i = 0; i < train.size(); ++i) {
    const double x = f.px(train.inputs(i, 0));
    const double sd = std::sqrt(train.noise_variances(i));
    s << "<line x1=\"" << num(x) << "\" y1=\"" << num(f.py(train.values(i) - sd)) << "\" x2=\""
      << num(x) << "\" y2=\"" << num(f.py(train.values(i) + sd))
      << "\" stroke=\"#c0392b\" stroke-width=\"1\"/>\n"
      << "<circle cx=\"" << num(x) << "\" cy=\"" << num(f.py(train.values(i)))
      << "\" r=\"3\" fill=\"#e74c3c\"/>\n";
  }
  s << "</g>\n<g class=\"series\" id=\"test\" data-label=\"held-out test data\">\n";
  for (Eigen::Index i = 0; i < test.size(); ++i) {
    s << "<circle cx=\"" << num(f.px(test.inputs(i, 0))) << "\" cy=\"" << num(f.py(test.values(i)))
      << "\" r=\"2.5\" fill=\"#f1c40f\" stroke=\"#8a6d00\" stroke-width=\"0.5\"/>\n";
  }
  s << "</g>\n" << axes(f, "x", "f(x)");

  static constexpr std::array<std::pair<const char*, const char*>, 5> kLegend = {{
      {"truth", "#1f4fbf"},
      {"predictive mean", "#0aa6c2"},
      {"2-sigma credible band", "#7fdbea"},
      {"training data", "#e74c3c"},
      {"held-out test data", "#f1c40f"},
  }};
  s << "<g id=\"legend\">\n";
  for (std::size_t k = 0; k < kLegend.size(); ++k) {
    const double y = f.top + 10 + 20.0 * static_cast<double>(k);
    s << "<rect x=\"" << num(f.left + f.w + 15) << "\" y=\"" << num(y - 8)
      << "\" width=\"14\" height=\"10\" fill=\"" << kLegend[k].second << "\"/>\n"
      << "<text x=\"" << num(f.left + f.w + 35) << "\" y=\"" << num(y + 1)
      << "\" font-size=\"12\">" << kLegend[k].first << "</text>\n";
  }
  s << "</g>\n</svg>\n";
  write_text_file(path, s.str());
}

CredibleContour hpd_level(const BetaPosterior& posterior, double target) {
  const Eigen::Index n = posterior.log_density.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const double* ld = posterior.log_density.data();
  const double* mass = posterior.cell_mass.data();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return ld[a] > ld[b]; });

  CredibleContour out;
  out.target = target;
  double acc = 0.0;
  std::size_t k = 0;
  for (; k < order.size(); ++k) {
    acc += mass[order[k]];
    if (acc >= target) break;
  }
  k = std::min(k, order.size() - 1);
  out.log_density_level = ld[order[k]];
  double enclosed = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (ld[i] >= out.log_density_level) enclosed += mass[i];
  }
  out.enclosed_mass = enclosed;
  return out;
}

HeatmapSummary emit_posterior_heatmap(const BetaPosterior& posterior, const std::optional<BetaFit>& mle,
                                      const std::filesystem::path& csv_path,
                                      const std::filesystem::path& svg_path,
                                      const Settings& settings) {
  write_posterior_csv(posterior, csv_path, settings);

  HeatmapSummary summary;
  const double ld_max = posterior.log_density.maxCoeff();
  const double ld_min = posterior.log_density.minCoeff();
  summary.contours_defined = ld_max - ld_min > 1e-12;
  if (summary.contours_defined) {
    summary.contours.push_back(hpd_level(posterior, 0.683));
    summary.contours.push_back(hpd_level(posterior, 0.955));
  }

  const auto& g = posterior.grid;
  const int width = 640, height = 560;
  const Frame f{g.a_min, g.a_max, g.b_min, g.b_max, 70.0, 30.0, 460.0, 460.0};
  std::ostringstream s;
  s << svg_open(width, height) << settings_comment(settings);
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Block-average onto at most 120 x 120 display tiles.
  const Eigen::Index na = posterior.a_grid.size();
  const Eigen::Index nb = posterior.b_grid.size();
  const Eigen::Index step_a = std::max<Eigen::Index>(1, (na + 119) / 120);
  const Eigen::Index step_b = std::max<Eigen::Index>(1, (nb + 119) / 120);
  const double da = (g.a_max - g.a_min) / static_cast<double>(na);
  const double db = (g.b_max - g.b_min) / static_cast<double>(nb);
  std::vector<double> tiles;
  double tile_max = 0.0;
  for (Eigen::Index i = 0; i < na; i += step_a) {
    for (Eigen::Index j = 0; j < nb; j += step_b) {
      const Eigen::Index ra = std::min(step_a, na - i), rb = std::min(step_b, nb - j);
      const double m = posterior.cell_mass.block(i, j, ra, rb).sum() / static_cast<double>(ra * rb);
      tiles.push_back(m);
      tile_max = std::max(tile_max, m);
    }
  }
  s << "<g id=\"heatmap\" data-label=\"posterior density\">\n";
  std::size_t t = 0;
  for (Eigen::Index i = 0; i < na; i += step_a) {
    for (Eigen::Index j = 0; j < nb; j += step_b, ++t) {
      const Eigen::Index ra = std::min(step_a, na - i), rb = std::min(step_b, nb - j);
      const double a0 = g.a_min + static_cast<double>(i) * da;
      const double b0 = g.b_min + static_cast<double>(j) * db;
      const double a1 = a0 + static_cast<double>(ra) * da;
      const double b1 = b0 + static_cast<double>(rb) * db;
      s << "<rect x=\"" << num(f.px(a0)) << "\" y=\"" << num(f.py(b1)) << "\" width=\""
        << num(f.px(a1) - f.px(a0) + 0.3) << "\" height=\"" << num(f.py(b0) - f.py(b1) + 0.3)
        << "\" fill=\"" << color_ramp(tile_max > 0 ? tiles[t] / tile_max : 0.0) << "\"/>\n";
    }
  }
  s << "</g>\n";

  if (summary.contours_defined) {
    for (const CredibleContour& c : summary.contours) {
      s << "<g class=\"contour\" data-label=\"" << num(100 * c.target) << "% credible region\" data-mass=\""
        << num(c.enclosed_mass) << "\">\n<path d=\"" << contour_path(posterior, c.log_density_level, f)
        << "\" fill=\"none\" stroke=\"#ffd400\" stroke-width=\"1.5\"/>\n</g>\n";
    }
  } else {
    s << "<text id=\"no-contours\" x=\"" << num(f.left + f.w / 2) << "\" y=\"" << num(f.top + 20)
      << "\" font-size=\"13\" text-anchor=\"middle\" fill=\"white\">flat posterior: contours undefined</text>\n";
  }

  if (1.0 >= g.a_min && 1.0 <= g.a_max && 1.0 >= g.b_min && 1.0 <= g.b_max) {
    const double x = f.px(1.0), y = f.py(1.0);
    s << "<g id=\"uniform-model\" data-label=\"uniform model (1, 1)\" stroke=\"white\" stroke-width=\"2\">\n"
      << "<line x1=\"" << num(x - 7) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x + 7) << "\" y2=\""
      << num(y) << "\"/>\n<line x1=\"" << num(x) << "\" y1=\"" << num(y - 7) << "\" x2=\"" << num(x)
      << "\" y2=\"" << num(y + 7) << "\"/>\n</g>\n";
  }
  if (mle && !mle->degenerate && mle->a_hat >= g.a_min && mle->a_hat <= g.a_max &&
      mle->b_hat >= g.b_min && mle->b_hat <= g.b_max) {
    s << "<g id=\"mle\" data-label=\"maximum likelihood\">\n<circle cx=\"" << num(f.px(mle->a_hat))
      << "\" cy=\"" << num(f.py(mle->b_hat)) << "\" r=\"4\" fill=\"#e41a1c\"/>\n</g>\n";
  }
  s << axes(f, "a", "b") << "</svg>\n";
  write_text_file(svg_path, s.str());
  return summary;
}

}  // namespace kval

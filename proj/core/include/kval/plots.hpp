#pragma once

#include <filesystem>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "kval/formats.hpp"
#include "kval/gp_regression.hpp"
#include "kval/validation.hpp"

namespace kval {

/// Predictive mean with a +/- 2 sd band of the latent function.
struct FitBand {
  Eigen::VectorXd x;
  Eigen::VectorXd mean;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Eigen::VectorXd half_width() const { return 0.5 * (upper - lower); }
};

FitBand fit_band(const FittedGP& model, const Eigen::VectorXd& xs);

struct FitPlotOptions {
  /// Plot range; NaN means the hull of the truth grid and the data.
  double x_min = std::numeric_limits<double>::quiet_NaN();
  double x_max = std::numeric_limits<double>::quiet_NaN();
  int samples = 400;
  int width = 800;
  int height = 480;
};

/// SVG with five labeled series: truth (dashed), predictive mean (solid),
/// 2-sigma band, training points with 1-sigma error bars, and test points.
/// Throws UnsupportedPlotError for inputs with more than one dimension.
void emit_fit_plot(const FittedGP& model, const Points& truth_grid,
                   const Eigen::VectorXd& truth_values, const Dataset& train, const Dataset& test,
                   const std::filesystem::path& path, const FitPlotOptions& options = {},
                   const Settings& settings = {});

/// Highest-density region holding at least `target` posterior mass.
struct CredibleContour {
  double target = 0.0;
  /// Cells with log_density >= level are inside the region.
  double log_density_level = 0.0;
  double enclosed_mass = 0.0;
};

CredibleContour hpd_level(const BetaPosterior& posterior, double target);

struct HeatmapSummary {
  bool contours_defined = false;
  std::vector<CredibleContour> contours;  // 68.3% and 95.5%
};

/// Writes the posterior as CSV (a,b,density) and as an SVG heatmap with a "+"
/// at the uniform model (1, 1), a dot at the MLE, and the 68.3% / 95.5%
/// highest-posterior contours. A flat posterior gets a no-contour note.
HeatmapSummary emit_posterior_heatmap(const BetaPosterior& posterior, const std::optional<BetaFit>& mle,
                                      const std::filesystem::path& csv_path,
                                      const std::filesystem::path& svg_path,
                                      const Settings& settings = {});

}  // namespace kval

#pragma once

#include <functional>
#include <span>

#include <Eigen/Dense>

#include "kval/gp_regression.hpp"

namespace kval {

/// Mahalanobis statistic chi2_M = r^T K_pred^-1 r with r = observed - mean.
struct MahalanobisResult {
  double chi2 = 0.0;
  int dof = 0;
};

/// Solves through a Cholesky factor of the predictive covariance, trying the
/// bare matrix first and then the jitter ladder. Throws
/// SingularCovarianceError with the smallest eigenvalue if that fails.
MahalanobisResult mahalanobis(const Prediction& prediction, const Eigen::VectorXd& observed);

struct NormalModeOptions {
  /// Modes with eigenvalue below floor * max eigenvalue are dropped.
  double eigenvalue_floor = 1e-12;
  /// Survival probabilities are clamped to [clamp, 1 - clamp].
  double survival_clamp = 1e-15;
};

/// Residuals projected on the eigenvectors of K_pred and standardized:
///   O^T K_pred O = diag(s_k^2),  d = O^T r,  e_k = d_k / s_k,
///   p_k = 1 - Phi(e_k).
struct NormalModeResiduals {
  Eigen::VectorXd eigenvalues;        // s_k^2, descending, retained modes only
  Eigen::MatrixXd rotation;           // O, retained columns only
  Eigen::VectorXd rotated_residuals;  // d_k
  Eigen::VectorXd standardized;       // e_k
  Eigen::VectorXd survival_probs;     // p_k, clamped
  Eigen::Index dropped_modes = 0;
};

NormalModeResiduals normal_mode_residuals(const Prediction& prediction,
                                          const Eigen::VectorXd& observed,
                                          const NormalModeOptions& options = {});

/// Sufficient statistics of a sample for the Beta likelihood:
///   log L(a, b) = (a - 1) S_0 + (b - 1) S_1 - n log B(a, b)
/// with S_0 = sum log p and S_1 = sum log(1 - p).
struct BetaSufficientStats {
  double n = 0.0;
  double sum_log_p = 0.0;
  double sum_log_one_minus_p = 0.0;

  /// Clamps each p into [clamp, 1 - clamp] first.
  static BetaSufficientStats from(std::span<const double> p, double clamp = 1e-15);
  double log_likelihood(double a, double b) const;
};

double beta_log_likelihood(std::span<const double> p, double a, double b);

struct BetaFit {
  double a_hat = 1.0;
  double b_hat = 1.0;
  double max_log_likelihood = 0.0;
  bool converged = false;
  /// All p_k identical: the likelihood has no finite maximizer.
  bool degenerate = false;
};

/// Maximum-likelihood Beta fit by Nelder-Mead over (log a, log b), started
/// from the method-of-moments estimate. Needs at least two values.
BetaFit beta_mle(std::span<const double> p);

/// Bounds and resolution of the (a, b) posterior grid. Cells are equal-area
/// rectangles evaluated at their midpoints.
struct PosteriorGridConfig {
  double a_min = 0.05;
  double a_max = 3.0;
  double b_min = 0.05;
  double b_max = 3.0;
  int a_cells = 300;
  int b_cells = 300;

  void validate() const;
};

/// Posterior over (a, b) under a flat prior on the grid rectangle. Row i of
/// the matrices is a_grid(i), column j is b_grid(j).
struct BetaPosterior {
  PosteriorGridConfig grid;
  Eigen::VectorXd a_grid;       // cell midpoints
  Eigen::VectorXd b_grid;       // cell midpoints
  Eigen::MatrixXd log_density;  // log posterior density per unit area
  Eigen::MatrixXd cell_mass;    // sums to 1

  double cell_area() const;
  /// Cell containing (a, b); throws OutsideGridError.
  std::pair<Eigen::Index, Eigen::Index> locate(double a, double b) const;
};

/// Posterior from the unbinned Beta likelihood of `p`. Throws WidenGridError
/// when the (non-degenerate) MLE falls outside the grid.
BetaPosterior beta_posterior(std::span<const double> p, const PosteriorGridConfig& grid = {});

/// Same quadrature with an arbitrary log-likelihood.
BetaPosterior beta_posterior_from_log_likelihood(
    const PosteriorGridConfig& grid, const std::function<double(double, double)>& log_likelihood);

/// Mass of all cells whose density is strictly greater than that of the cell
/// containing (a, b): the credible level of the highest-density region whose
/// boundary passes through the point.
double iso_posterior_coverage(const BetaPosterior& posterior, double a, double b);

/// Density histogram of the p_k over [0, 1]; bins are [l, r) except the last,
/// which is closed.
struct PkHistogram {
  Eigen::VectorXd bin_left;
  Eigen::VectorXd bin_right;
  Eigen::VectorXi counts;
  Eigen::VectorXd density;
};

PkHistogram pk_histogram(std::span<const double> p, int bins = 10);

struct ValidationOptions {
  PosteriorGridConfig grid;
  NormalModeOptions modes;
  /// Likelihood level (relative to the maximum) that must not touch the grid
  /// edge; otherwise that edge is pushed out by a factor of two.
  double boundary_likelihood_ratio = 1e-6;
  int max_grid_widenings = 6;
};

struct ValidationReport {
  double mahalanobis = 0.0;
  int dof = 0;
  double p_value = 1.0;
  NormalModeResiduals residuals;
  BetaFit beta_fit;
  BetaPosterior posterior;
  double uniform_coverage = 0.0;
  int grid_widenings = 0;
  /// Set when near-null modes were dropped; chi2 and dof then cover the
  /// retained modes only.
  bool modes_dropped = false;
};

/// Full validation of a predictive distribution against held-out values.
ValidationReport validate(const Prediction& prediction, const Eigen::VectorXd& observed,
                          const ValidationOptions& options = {});

}  // namespace kval

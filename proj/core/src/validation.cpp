#include "kval/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "kval/cholesky.hpp"
#include "kval/errors.hpp"
#include "kval/nelder_mead.hpp"
#include "kval/specfn.hpp"
#include "kval/sym_eigen.hpp"

namespace kval {

namespace {

constexpr double kLogSearchMin = -9.0;  // a, b >= ~1.2e-4
constexpr double kLogSearchMax = 9.0;   // a, b <= ~8.1e3

void check_lengths(const Prediction& prediction, const Eigen::VectorXd& observed) {
  if (prediction.covariance.rows() != prediction.size() ||
      prediction.covariance.cols() != prediction.size()) {
    throw DimensionMismatchError("prediction covariance is not size x size");
  }
  if (observed.size() != prediction.size()) {
    throw DimensionMismatchError("observed has " + std::to_string(observed.size()) +
                                 " values, prediction " + std::to_string(prediction.size()));
  }
  if (observed.size() == 0) throw InvalidArgumentError("validation needs at least one value");
}

// Neumaier-compensated sum in a fixed (column-major) order.
double compensated_sum(const Eigen::MatrixXd& m) {
  double sum = 0.0;
  double c = 0.0;
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    const double x = m.data()[k];
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      c += (sum - t) + x;
    } else {
      c += (x - t) + sum;
    }
    sum = t;
  }
  return sum + c;
}

bool all_equal(std::span<const double> p) {
  return std::all_of(p.begin(), p.end(), [&](double v) { return v == p.front(); });
}

BetaFit fit_from_stats(const BetaSufficientStats& stats, std::span<const double> p) {
  BetaFit fit;
  if (all_equal(p)) {
    fit.degenerate = true;
    fit.a_hat = std::numeric_limits<double>::quiet_NaN();
    fit.b_hat = std::numeric_limits<double>::quiet_NaN();
    fit.max_log_likelihood = std::numeric_limits<double>::infinity();
    return fit;
  }

  double mean = 0.0;
  for (double v : p) mean += v;
  mean /= static_cast<double>(p.size());
  double var = 0.0;
  for (double v : p) var += (v - mean) * (v - mean);
  var /= static_cast<double>(p.size() - 1);
  double a0 = 1.0;
  double b0 = 1.0;
  if (var > 0.0 && var < mean * (1.0 - mean)) {
    const double common = mean * (1.0 - mean) / var - 1.0;
    a0 = std::clamp(mean * common, 1e-3, 1e3);
    b0 = std::clamp((1.0 - mean) * common, 1e-3, 1e3);
  }

  auto objective = [&](const Eigen::VectorXd& x) {
    if ((x.array() < kLogSearchMin).any() || (x.array() > kLogSearchMax).any()) {
      return std::numeric_limits<double>::infinity();
    }
    return -stats.log_likelihood(std::exp(x(0)), std::exp(x(1)));
  };
  NelderMeadOptions options;
  options.f_tolerance = 1e-10;
  options.x_tolerance = 1e-9;
  options.initial_step = 0.3;
  options.max_evaluations = 5000;

  Eigen::VectorXd start(2);
  start << std::log(a0), std::log(b0);
  NelderMeadResult r = nelder_mead_minimize(objective, start, options);
  // A restart from the first optimum guards against a collapsed simplex.
  if (r.converged) {
    options.initial_step = 0.05;
    const NelderMeadResult polish = nelder_mead_minimize(objective, r.x, options);
    if (polish.value <= r.value) r = polish;
  }

  fit.converged = r.converged;
  fit.a_hat = std::exp(r.x(0));
  fit.b_hat = std::exp(r.x(1));
  fit.max_log_likelihood = -r.value;
  // The uniform model has log-likelihood exactly 0.
  if (!(fit.max_log_likelihood >= 0.0)) {
    fit.a_hat = 1.0;
    fit.b_hat = 1.0;
    fit.max_log_likelihood = 0.0;
  }
  return fit;
}

BetaPosterior posterior_checked(const BetaSufficientStats& stats, const BetaFit& fit,
                                const PosteriorGridConfig& grid) {
  grid.validate();
  if (!fit.degenerate && (fit.a_hat < grid.a_min || fit.a_hat > grid.a_max ||
                          fit.b_hat < grid.b_min || fit.b_hat > grid.b_max)) {
    std::ostringstream msg;
    msg << "Beta MLE (" << fit.a_hat << ", " << fit.b_hat << ") lies outside the posterior grid ["
        << grid.a_min << ", " << grid.a_max << "] x [" << grid.b_min << ", " << grid.b_max
        << "]; widen the grid";
    throw WidenGridError(msg.str());
  }
  return beta_posterior_from_log_likelihood(
      grid, [&stats](double a, double b) { return stats.log_likelihood(a, b); });
}

}  // namespace

MahalanobisResult mahalanobis(const Prediction& prediction, const Eigen::VectorXd& observed) {
  check_lengths(prediction, observed);
  const Eigen::VectorXd r = observed - prediction.mean;
  JitterLadder ladder;
  ladder.try_zero_first = true;
  JitteredCholesky factor;
  try {
    factor = cholesky_with_jitter(prediction.covariance, ladder);
  } catch (const IllConditionedError&) {
    const double smallest = jacobi_eigen(prediction.covariance).eigenvalues.minCoeff();
    std::ostringstream msg;
    msg << "predictive covariance is singular; smallest eigenvalue " << smallest;
    throw SingularCovarianceError(msg.str(), smallest);
  }
  const Eigen::VectorXd y = factor.lower.triangularView<Eigen::Lower>().solve(r);
  return {y.squaredNorm(), static_cast<int>(observed.size())};
}

NormalModeResiduals normal_mode_residuals(const Prediction& prediction,
                                          const Eigen::VectorXd& observed,
                                          const NormalModeOptions& options) {
  check_lengths(prediction, observed);
  const SymmetricEigen eig = jacobi_eigen(prediction.covariance);
  const double floor = options.eigenvalue_floor * std::max(eig.eigenvalues(0), 0.0);
  Eigen::Index kept = 0;
  while (kept < eig.eigenvalues.size() && eig.eigenvalues(kept) > floor) ++kept;
  if (kept == 0) {
    throw SingularCovarianceError("predictive covariance has no positive modes",
                                  eig.eigenvalues.minCoeff());
  }

  NormalModeResiduals out;
  out.dropped_modes = eig.eigenvalues.size() - kept;
  out.eigenvalues = eig.eigenvalues.head(kept);
  out.rotation = eig.eigenvectors.leftCols(kept);
  out.rotated_residuals = out.rotation.transpose() * (observed - prediction.mean);
  out.standardized = out.rotated_residuals.array() / out.eigenvalues.array().sqrt();
  out.survival_probs.resize(kept);
  const double lo = options.survival_clamp;
  for (Eigen::Index k = 0; k < kept; ++k) {
    out.survival_probs(k) =
        std::clamp(specfn::normal_survival(out.standardized(k)), lo, 1.0 - lo);
  }
  return out;
}

BetaSufficientStats BetaSufficientStats::from(std::span<const double> p, double clamp) {
  BetaSufficientStats s;
  s.n = static_cast<double>(p.size());
  for (double v : p) {
    if (!std::isfinite(v)) throw InvalidArgumentError("Beta likelihood: non-finite p");
    const double c = std::clamp(v, clamp, 1.0 - clamp);
    s.sum_log_p += std::log(c);
    s.sum_log_one_minus_p += std::log1p(-c);
  }
  return s;
}

double BetaSufficientStats::log_likelihood(double a, double b) const {
  return (a - 1.0) * sum_log_p + (b - 1.0) * sum_log_one_minus_p -
         n * specfn::log_beta_function(a, b);
}

double beta_log_likelihood(std::span<const double> p, double a, double b) {
  double sum = 0.0;
  for (double v : p) sum += specfn::log_beta_density(v, a, b);
  return sum;
}

BetaFit beta_mle(std::span<const double> p) {
  if (p.size() < 2) throw InvalidArgumentError("beta_mle needs at least two values");
  return fit_from_stats(BetaSufficientStats::from(p), p);
}

void PosteriorGridConfig::validate() const {
  if (!(a_min > 0.0 && b_min > 0.0 && a_max > a_min && b_max > b_min) ||
      !std::isfinite(a_max) || !std::isfinite(b_max)) {
    throw InvalidArgumentError("posterior grid bounds must satisfy 0 < min < max");
  }
  if (a_cells < 50 || b_cells < 50) {
    throw InvalidArgumentError("posterior grid needs at least 50 cells per axis");
  }
}

double BetaPosterior::cell_area() const {
  return (grid.a_max - grid.a_min) / grid.a_cells * ((grid.b_max - grid.b_min) / grid.b_cells);
}

std::pair<Eigen::Index, Eigen::Index> BetaPosterior::locate(double a, double b) const {
  if (!(a >= grid.a_min && a <= grid.a_max && b >= grid.b_min && b <= grid.b_max)) {
    std::ostringstream msg;
    msg << "point (" << a << ", " << b << ") is outside the posterior grid";
    throw OutsideGridError(msg.str());
  }
  const auto index = [](double x, double lo, double hi, int cells) {
    const auto i = static_cast<Eigen::Index>(std::floor((x - lo) / (hi - lo) * cells));
    return std::clamp<Eigen::Index>(i, 0, cells - 1);
  };
  return {index(a, grid.a_min, grid.a_max, grid.a_cells),
          index(b, grid.b_min, grid.b_max, grid.b_cells)};
}

BetaPosterior beta_posterior_from_log_likelihood(
    const PosteriorGridConfig& grid, const std::function<double(double, double)>& log_likelihood) {
  BetaPosterior post;
  post.grid = grid;
  const double da = (grid.a_max - grid.a_min) / grid.a_cells;
  const double db = (grid.b_max - grid.b_min) / grid.b_cells;
  post.a_grid.resize(grid.a_cells);
  post.b_grid.resize(grid.b_cells);
  for (int i = 0; i < grid.a_cells; ++i) post.a_grid(i) = grid.a_min + (i + 0.5) * da;
  for (int j = 0; j < grid.b_cells; ++j) post.b_grid(j) = grid.b_min + (j + 0.5) * db;

  Eigen::MatrixXd ll(grid.a_cells, grid.b_cells);
  for (int j = 0; j < grid.b_cells; ++j) {
    for (int i = 0; i < grid.a_cells; ++i) ll(i, j) = log_likelihood(post.a_grid(i), post.b_grid(j));
  }
  const double peak = ll.maxCoeff();
  if (!std::isfinite(peak)) {
    throw NumericalError("posterior log-likelihood has no finite maximum on the grid");
  }
  Eigen::MatrixXd unnormalized = (ll.array() - peak).exp();
  const double total = compensated_sum(unnormalized);
  post.cell_mass = unnormalized / total;
  post.log_density = ll.array() - peak - std::log(total * da * db);
  return post;
}

BetaPosterior beta_posterior(std::span<const double> p, const PosteriorGridConfig& grid) {
  if (p.empty()) throw InvalidArgumentError("beta_posterior needs at least one value");
  const BetaSufficientStats stats = BetaSufficientStats::from(p);
  BetaFit fit;
  if (p.size() >= 2) {
    fit = fit_from_stats(stats, p);
  } else {
    fit.degenerate = true;
  }
  return posterior_checked(stats, fit, grid);
}

double iso_posterior_coverage(const BetaPosterior& posterior, double a, double b) {
  const auto [i, j] = posterior.locate(a, b);
  const double level = posterior.log_density(i, j);
  double covered = 0.0;
  double c = 0.0;
  for (Eigen::Index k = 0; k < posterior.cell_mass.size(); ++k) {
    if (posterior.log_density.data()[k] > level) {
      const double y = posterior.cell_mass.data()[k] - c;
      const double t = covered + y;
      c = (t - covered) - y;
      covered = t;
    }
  }
  return std::clamp(covered, 0.0, 1.0);
}

PkHistogram pk_histogram(std::span<const double> p, int bins) {
  if (p.empty()) throw InvalidArgumentError("pk_histogram: no values");
  if (bins < 1) throw InvalidArgumentError("pk_histogram: bins must be >= 1");
  PkHistogram h;
  h.bin_left.resize(bins);
  h.bin_right.resize(bins);
  h.counts = Eigen::VectorXi::Zero(bins);
  for (int k = 0; k < bins; ++k) {
    h.bin_left(k) = static_cast<double>(k) / bins;
    h.bin_right(k) = static_cast<double>(k + 1) / bins;
  }
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgumentError("pk_histogram: value outside [0, 1]");
    const int k = std::min(static_cast<int>(std::floor(v * bins)), bins - 1);
    ++h.counts(k);
  }
  const double width = 1.0 / bins;
  h.density = h.counts.cast<double>() / (static_cast<double>(p.size()) * width);
  return h;
}

ValidationReport validate(const Prediction& prediction, const Eigen::VectorXd& observed,
                          const ValidationOptions& options) {
  ValidationReport report;
  report.residuals = normal_mode_residuals(prediction, observed, options.modes);
  if (report.residuals.dropped_modes > 0) {
    report.modes_dropped = true;
    report.mahalanobis = report.residuals.standardized.squaredNorm();
    report.dof = static_cast<int>(report.residuals.standardized.size());
  } else {
    const MahalanobisResult m = mahalanobis(prediction, observed);
    report.mahalanobis = m.chi2;
    report.dof = m.dof;
  }
  report.p_value = specfn::chi2_survival(report.mahalanobis, report.dof);

  const Eigen::VectorXd& p = report.residuals.survival_probs;
  const std::span<const double> ps(p.data(), static_cast<std::size_t>(p.size()));
  const BetaSufficientStats stats = BetaSufficientStats::from(ps);
  if (ps.size() >= 2) {
    report.beta_fit = fit_from_stats(stats, ps);
  } else {
    report.beta_fit.degenerate = true;
  }

  PosteriorGridConfig grid = options.grid;
  const double edge_level = std::log(options.boundary_likelihood_ratio);
  for (;;) {
    const BetaFit& fit = report.beta_fit;
    bool widen_a_lo = false, widen_a_hi = false, widen_b_lo = false, widen_b_hi = false;
    if (!fit.degenerate) {
      widen_a_lo = fit.a_hat < grid.a_min;
      widen_a_hi = fit.a_hat > grid.a_max;
      widen_b_lo = fit.b_hat < grid.b_min;
      widen_b_hi = fit.b_hat > grid.b_max;
    }
    const bool mle_outside = widen_a_lo || widen_a_hi || widen_b_lo || widen_b_hi;
    if (!mle_outside) {
      report.posterior = posterior_checked(stats, fit, grid);
      if (fit.degenerate) break;
      // log_density differs from the log-likelihood by a constant.
      const Eigen::MatrixXd& ld = report.posterior.log_density;
      const double peak = ld.maxCoeff();
      const Eigen::Index last_a = ld.rows() - 1;
      const Eigen::Index last_b = ld.cols() - 1;
      widen_a_lo = ld.row(0).maxCoeff() - peak > edge_level;
      widen_a_hi = ld.row(last_a).maxCoeff() - peak > edge_level;
      widen_b_lo = ld.col(0).maxCoeff() - peak > edge_level;
      widen_b_hi = ld.col(last_b).maxCoeff() - peak > edge_level;
      if (!(widen_a_lo || widen_a_hi || widen_b_lo || widen_b_hi)) break;
    }
    if (report.grid_widenings >= options.max_grid_widenings) {
      if (mle_outside) report.posterior = posterior_checked(stats, fit, grid);
      break;
    }
    if (widen_a_lo) grid.a_min *= 0.5;
    if (widen_a_hi) grid.a_max *= 2.0;
    if (widen_b_lo) grid.b_min *= 0.5;
    if (widen_b_hi) grid.b_max *= 2.0;
    ++report.grid_widenings;
  }
  report.uniform_coverage = iso_posterior_coverage(report.posterior, 1.0, 1.0);
  return report;
}

}  // namespace kval

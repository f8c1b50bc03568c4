#pragma once

#include <functional>

#include <Eigen/Dense>

namespace kval {

struct NelderMeadOptions {
  int max_evaluations = 4000;
  /// Converged when the spread of objective values across the simplex is
  /// below this...
  double f_tolerance = 1e-10;
  /// ...and the simplex diameter (infinity norm) is below this.
  double x_tolerance = 1e-8;
  double initial_step = 0.5;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Minimizes `objective` from `start`. Non-finite objective values are
/// treated as +infinity, which lets callers encode box constraints.
NelderMeadResult nelder_mead_minimize(const std::function<double(const Eigen::VectorXd&)>& objective,
                                      const Eigen::VectorXd& start,
                                      const NelderMeadOptions& options = {});

}  // namespace kval

#pragma once

#include <Eigen/Dense>

namespace kval {

/// Jitter escalation: start at `start_relative * max(diag)`, multiply by
/// `growth` up to `max_relative * max(diag)`. With `try_zero_first` the bare
/// matrix is attempted before any jitter is added.
struct JitterLadder {
  double start_relative = 1e-10;
  double max_relative = 1e-4;
  double growth = 10.0;
  bool try_zero_first = false;
};

/// Lower Cholesky factor of (A + jitter I) together with the jitter that was
/// needed.
struct JitteredCholesky {
  Eigen::MatrixXd lower;
  double jitter = 0.0;

  /// Solves (A + jitter I) x = b.
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;
  double log_determinant() const;
};

/// Factorizes the symmetric matrix `a` following `ladder`. Throws
/// IllConditionedError carrying the last jitter attempted when every rung
/// fails.
JitteredCholesky cholesky_with_jitter(const Eigen::MatrixXd& a, const JitterLadder& ladder = {});

}  // namespace kval

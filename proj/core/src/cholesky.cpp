#include "kval/cholesky.hpp"

#include <cmath>
#include <sstream>

#include "kval/errors.hpp"

namespace kval {

namespace {

// Plain LLT on the lower triangle; returns false on a non-positive pivot.
bool try_cholesky(const Eigen::MatrixXd& a, double jitter, Eigen::MatrixXd& lower) {
  Eigen::MatrixXd shifted = a;
  shifted.diagonal().array() += jitter;
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success) return false;
  lower = llt.matrixL();
  for (Eigen::Index i = 0; i < lower.rows(); ++i) {
    if (!(lower(i, i) > 0.0) || !std::isfinite(lower(i, i))) return false;
  }
  return true;
}

}  // namespace

Eigen::VectorXd JitteredCholesky::solve(const Eigen::VectorXd& b) const {
  const auto l = lower.triangularView<Eigen::Lower>();
  Eigen::VectorXd y = l.solve(b);
  return l.transpose().solve(y);
}

Eigen::MatrixXd JitteredCholesky::solve(const Eigen::MatrixXd& b) const {
  const auto l = lower.triangularView<Eigen::Lower>();
  Eigen::MatrixXd y = l.solve(b);
  return l.transpose().solve(y);
}

double JitteredCholesky::log_determinant() const {
  return 2.0 * lower.diagonal().array().log().sum();
}

JitteredCholesky cholesky_with_jitter(const Eigen::MatrixXd& a, const JitterLadder& ladder) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatchError("cholesky_with_jitter: matrix is not square");
  }
  JitteredCholesky out;
  if (a.rows() == 0) return out;
  if (!a.allFinite()) {
    throw IllConditionedError("cholesky_with_jitter: matrix has non-finite entries", 0.0);
  }
  const double scale = a.diagonal().cwiseAbs().maxCoeff();
  if (ladder.try_zero_first && try_cholesky(a, 0.0, out.lower)) {
    out.jitter = 0.0;
    return out;
  }
  const double top = ladder.max_relative * scale * (1.0 + 1e-12);
  double jitter = ladder.start_relative * scale;
  double last = jitter;
  while (jitter <= top) {
    last = jitter;
    if (try_cholesky(a, jitter, out.lower)) {
      out.jitter = jitter;
      return out;
    }
    jitter *= ladder.growth;
  }
  std::ostringstream msg;
  msg << "Cholesky factorization failed up to jitter " << last << " (max diagonal " << scale
      << ")";
  throw IllConditionedError(msg.str(), last);
}

}  // namespace kval

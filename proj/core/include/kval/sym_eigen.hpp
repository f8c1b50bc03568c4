#pragma once

#include <Eigen/Dense>

namespace kval {

/// Eigendecomposition A = V diag(lambda) V^T of a real symmetric matrix.
struct SymmetricEigen {
  Eigen::VectorXd eigenvalues;   // descending
  Eigen::MatrixXd eigenvectors;  // column k pairs with eigenvalues(k)
  int sweeps = 0;
};

/// Cyclic Jacobi rotations. A rotation is skipped once
/// |a_pq| <= eps * sqrt(|a_pp a_qq|), which keeps small eigenvalues of
/// positive-definite matrices accurate to high relative precision. Throws
/// ConvergenceError after `max_sweeps` sweeps without convergence.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& a, int max_sweeps = 60);

}  // namespace kval

#pragma once

#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace kval {

/// Input points are stored one per row; a 1-D dataset of N points is an
/// N x 1 matrix.
using Points = Eigen::MatrixXd;

enum class KernelFamily { SquaredExponential, Matern15, Matern25 };

/// Canonical short name used in config and model files ("rbf", "matern15",
/// "matern25").
std::string_view to_string(KernelFamily family);

/// Accepts the canonical names plus a few aliases ("se", "squared_exponential",
/// "matern32", "matern52"). Throws InvalidArgumentError otherwise.
KernelFamily parse_kernel_family(std::string_view name);

/// Stationary covariance kernel k(r) with signal variance and length scale.
struct KernelSpec {
  KernelFamily family = KernelFamily::SquaredExponential;
  double signal_variance = 1.0;
  double length_scale = 1.0;

  /// Throws InvalidSpecError unless both hyperparameters are finite and > 0.
  void validate() const;
};

/// Constant prior mean.
struct MeanSpec {
  double constant = 0.0;

  double operator()() const noexcept { return constant; }
};

/// k as a function of the Euclidean distance r >= 0. Does not validate.
double kernel_of_distance(const KernelSpec& spec, double r) noexcept;

/// d k / d log(length_scale) at distance r.
double kernel_dlog_length_scale(const KernelSpec& spec, double r) noexcept;

double eval_kernel(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& x_prime);

/// |A| x |B| cross-covariance. Rows of `a` and `b` are points.
Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Points& a, const Points& b);

/// Symmetric Gram matrix K(A, A); only the upper triangle is evaluated.
Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Points& a);

/// Pairwise Euclidean distances between rows of `a` and rows of `b`.
Eigen::MatrixXd pairwise_distances(const Points& a, const Points& b);

}  // namespace kval

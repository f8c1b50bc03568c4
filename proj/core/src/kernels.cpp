#include "kval/kernels.hpp"

#include <cmath>

#include "kval/errors.hpp"

namespace kval {

namespace {

constexpr double kSqrt3 = 1.7320508075688772935;
constexpr double kSqrt5 = 2.2360679774997896964;

void check_same_dimension(const Points& a, const Points& b) {
  if (a.cols() != b.cols()) {
    throw DimensionMismatchError("gram_matrix: point sets have dimensions " +
                                 std::to_string(a.cols()) + " and " +
                                 std::to_string(b.cols()));
  }
}

}  // namespace

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::SquaredExponential:
      return "rbf";
    case KernelFamily::Matern15:
      return "matern15";
    case KernelFamily::Matern25:
      return "matern25";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(std::string_view name) {
  if (name == "rbf" || name == "se" || name == "squared_exponential") {
    return KernelFamily::SquaredExponential;
  }
  if (name == "matern15" || name == "matern32") return KernelFamily::Matern15;
  if (name == "matern25" || name == "matern52") return KernelFamily::Matern25;
  throw InvalidArgumentError("unknown kernel family '" + std::string(name) + "'");
}

void KernelSpec::validate() const {
  if (!(std::isfinite(signal_variance) && signal_variance > 0.0)) {
    throw InvalidSpecError("kernel signal_variance must be finite and positive");
  }
  if (!(std::isfinite(length_scale) && length_scale > 0.0)) {
    throw InvalidSpecError("kernel length_scale must be finite and positive");
  }
}

double kernel_of_distance(const KernelSpec& spec, double r) noexcept {
  const double s2 = spec.signal_variance;
  switch (spec.family) {
    case KernelFamily::SquaredExponential: {
      const double z = r / spec.length_scale;
      return s2 * std::exp(-0.5 * z * z);
    }
    case KernelFamily::Matern15: {
      const double u = kSqrt3 * r / spec.length_scale;
      return s2 * (1.0 + u) * std::exp(-u);
    }
    case KernelFamily::Matern25: {
      const double u = kSqrt5 * r / spec.length_scale;
      return s2 * (1.0 + u + u * u / 3.0) * std::exp(-u);
    }
  }
  return 0.0;
}

double kernel_dlog_length_scale(const KernelSpec& spec, double r) noexcept {
  const double s2 = spec.signal_variance;
  switch (spec.family) {
    case KernelFamily::SquaredExponential: {
      const double z2 = (r / spec.length_scale) * (r / spec.length_scale);
      return s2 * z2 * std::exp(-0.5 * z2);
    }
    case KernelFamily::Matern15: {
      const double u = kSqrt3 * r / spec.length_scale;
      return s2 * u * u * std::exp(-u);
    }
    case KernelFamily::Matern25: {
      const double u = kSqrt5 * r / spec.length_scale;
      return s2 * (u * u / 3.0) * (1.0 + u) * std::exp(-u);
    }
  }
  return 0.0;
}

double eval_kernel(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& x_prime) {
  spec.validate();
  if (x.size() != x_prime.size()) {
    throw DimensionMismatchError("eval_kernel: points have different dimensions");
  }
  return kernel_of_distance(spec, (x - x_prime).norm());
}

Eigen::MatrixXd pairwise_distances(const Points& a, const Points& b) {
  check_same_dimension(a, b);
  Eigen::MatrixXd d(a.rows(), b.rows());
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      d(i, j) = (a.row(i) - b.row(j)).norm();
    }
  }
  return d;
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Points& a, const Points& b) {
  spec.validate();
  check_same_dimension(a, b);
  Eigen::MatrixXd k(a.rows(), b.rows());
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      k(i, j) = kernel_of_distance(spec, (a.row(i) - b.row(j)).norm());
    }
  }
  return k;
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Points& a) {
  spec.validate();
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    k(j, j) = spec.signal_variance;
    for (Eigen::Index i = 0; i < j; ++i) {
      const double v = kernel_of_distance(spec, (a.row(i) - a.row(j)).norm());
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

}  // namespace kval

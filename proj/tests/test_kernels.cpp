#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "kval/errors.hpp"
#include "kval/kernels.hpp"
#include "kval_test_support.hpp"

namespace kval {
namespace {

using testing::kAllFamilies;

// e^{-1/2}, 30 digits (mpmath).
constexpr double kExpMinusHalf = 0.606530659712633423603799534991;

TEST(Kernels, ZeroDistanceReturnsSignalVariance) {
  EXPECT_EQ(kernel_of_distance({KernelFamily::SquaredExponential, 1.0, 1.0}, 0.0), 1.0);
  EXPECT_EQ(kernel_of_distance({KernelFamily::Matern15, 1.0, 1.0}, 0.0), 1.0);
  EXPECT_EQ(kernel_of_distance({KernelFamily::Matern25, 2.5, 0.3}, 0.0), 2.5);
  Eigen::VectorXd x(2);
  x << 0.3, -1.2;
  EXPECT_EQ(eval_kernel({KernelFamily::SquaredExponential, 1.0, 1.0}, x, x), 1.0);
}

TEST(Kernels, RbfAtUnitDistance) {
  EXPECT_NEAR(kernel_of_distance({KernelFamily::SquaredExponential, 1.0, 1.0}, 1.0), kExpMinusHalf,
              1e-15);
}

TEST(Kernels, ClosedFormsAtUnitScaledDistance) {
  // Values at r = l: Matern 3/2 gives (1 + sqrt3) e^{-sqrt3}, Matern 5/2
  // gives (1 + sqrt5 + 5/3) e^{-sqrt5} (mpmath, 30 digits).
  EXPECT_NEAR(kernel_of_distance({KernelFamily::Matern15, 1.0, 0.7}, 0.7),
              0.483357724596507650595075082258, 1e-15);
  EXPECT_NEAR(kernel_of_distance({KernelFamily::Matern25, 1.0, 0.7}, 0.7),
              0.523994108831820310592713250761, 1e-15);
}

TEST(Kernels, InvalidHyperparametersAreRejected) {
  EXPECT_THROW((KernelSpec{KernelFamily::Matern15, 0.0, 1.0}.validate()), InvalidSpecError);
  EXPECT_THROW((KernelSpec{KernelFamily::Matern15, 1.0, -1.0}.validate()), InvalidSpecError);
  EXPECT_THROW((KernelSpec{KernelFamily::Matern15, 1.0, std::nan("")}.validate()), InvalidSpecError);
  EXPECT_NO_THROW((KernelSpec{KernelFamily::Matern15, 1.0, 1.0}.validate()));
}

TEST(Kernels, FamilyNamesRoundTrip) {
  for (auto family : kAllFamilies) EXPECT_EQ(parse_kernel_family(to_string(family)), family);
  EXPECT_EQ(parse_kernel_family("matern52"), KernelFamily::Matern25);
  EXPECT_THROW(parse_kernel_family("periodic"), InvalidArgumentError);
}

TEST(Kernels, StationarityUnderTranslation) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (auto family : kAllFamilies) {
    const KernelSpec spec{family, 1.3, 0.4};
    for (int trial = 0; trial < 100; ++trial) {
      // Translations by multiples of 2^-k leave differences exact.
      Eigen::VectorXd x(1), y(1);
      x << std::ldexp(std::round(std::ldexp(u(rng), 20)), -20);
      y << std::ldexp(std::round(std::ldexp(u(rng), 20)), -20);
      const double shift = std::ldexp(std::round(std::ldexp(u(rng), 10)), -10);
      Eigen::VectorXd xs = x.array() + shift, ys = y.array() + shift;
      EXPECT_EQ(eval_kernel(spec, x, y), eval_kernel(spec, xs, ys));
      EXPECT_EQ(eval_kernel(spec, x, y), eval_kernel(spec, y, x));
    }
  }
}

TEST(Kernels, StrictlyDecreasingInDistance) {
  for (auto family : kAllFamilies) {
    const KernelSpec spec{family, 1.0, 1.0};
    double previous = kernel_of_distance(spec, 0.0);
    for (int i = 1; i <= 400; ++i) {
      const double value = kernel_of_distance(spec, 0.02 * i);
      EXPECT_LT(value, previous) << to_string(family) << " r=" << 0.02 * i;
      previous = value;
    }
  }
}

TEST(Kernels, SmallDistanceSmoothnessOrdering) {
  // g(r) = (1 - k(r)/s2) / r^2 tends to a constant for every family. Its slope
  // vanishes for the RBF and Matern 5/2 kernels, whose expansions have no r^3
  // term, while for Matern 3/2 it tends to -sqrt(3) / l^3.
  const double r = 1e-4;
  for (auto family : kAllFamilies) {
    const KernelSpec spec{family, 1.0, 1.0};
    auto g = [&](double d) { return (1.0 - kernel_of_distance(spec, d)) / (d * d); };
    const double slope = (g(2.0 * r) - g(r)) / r;
    if (family == KernelFamily::Matern15) {
      EXPECT_NEAR(slope, -std::sqrt(3.0), 1e-2);
    } else {
      EXPECT_LT(std::abs(slope), 1e-2) << to_string(family);
    }
  }
}

TEST(Kernels, LengthScaleDerivativeMatchesFiniteDifference) {
  for (auto family : kAllFamilies) {
    for (double r : {0.0, 0.05, 0.3, 1.0, 2.7}) {
      const double l = 0.6, h = 1e-5;
      const KernelSpec up{family, 1.4, l * std::exp(h)};
      const KernelSpec down{family, 1.4, l * std::exp(-h)};
      const double fd = (kernel_of_distance(up, r) - kernel_of_distance(down, r)) / (2.0 * h);
      EXPECT_NEAR(kernel_dlog_length_scale({family, 1.4, l}, r), fd, 1e-8);
    }
  }
}

TEST(GramMatrix, SinglePoint) {
  Points a(1, 1);
  a << 0.25;
  const Eigen::MatrixXd k = gram_matrix({KernelFamily::Matern25, 1.7, 0.2}, a);
  ASSERT_EQ(k.rows(), 1);
  EXPECT_EQ(k(0, 0), 1.7);
}

TEST(GramMatrix, ExactlySymmetric) {
  std::mt19937_64 rng(3);
  const Points a = testing::random_points(rng, 30, 0.0, 1.0);
  for (auto family : kAllFamilies) {
    const Eigen::MatrixXd k = gram_matrix({family, 0.8, 0.15}, a);
    EXPECT_TRUE((k.array() == k.transpose().array()).all());
    const Eigen::MatrixXd cross = gram_matrix({family, 0.8, 0.15}, a, a);
    EXPECT_TRUE((cross.array() == k.array()).all());
  }
}

TEST(GramMatrix, PositiveSemidefiniteOnRandomPoints) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Points a = testing::random_points(rng, 5, 0.0, 1.0);
    const Eigen::MatrixXd k = gram_matrix({KernelFamily::SquaredExponential, 1.0, 0.5}, a);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(k);
    EXPECT_GE(oracle.eigenvalues().minCoeff(), -1e-10);
  }
}

TEST(GramMatrix, CholeskyWithSmallJitterOnDistinctPoints) {
  std::mt19937_64 rng(8);
  for (auto family : kAllFamilies) {
    const Points a = testing::random_points(rng, 25, 0.0, 1.0);
    const Eigen::MatrixXd k = gram_matrix({family, 2.0, 0.05}, a);
    Eigen::MatrixXd jittered = k;
    jittered.diagonal().array() += 1e-10 * 2.0;
    EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(jittered).info(), Eigen::Success) << to_string(family);
  }
}

TEST(GramMatrix, CrossShapeAndDimensionMismatch) {
  Points a(3, 2), b(4, 2), c(2, 1);
  a.setRandom();
  b.setRandom();
  c.setRandom();
  const KernelSpec spec{KernelFamily::Matern15, 1.0, 1.0};
  const Eigen::MatrixXd k = gram_matrix(spec, a, b);
  EXPECT_EQ(k.rows(), 3);
  EXPECT_EQ(k.cols(), 4);
  EXPECT_DOUBLE_EQ(k(1, 2), eval_kernel(spec, a.row(1).transpose(), b.row(2).transpose()));
  EXPECT_THROW(gram_matrix(spec, a, c), DimensionMismatchError);
}

}  // namespace
}  // namespace kval

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <boost/math/statistics/anderson_darling.hpp>
#include <gtest/gtest.h>

#include "kval/errors.hpp"
#include "kval/specfn.hpp"
#include "kval/validation.hpp"
#include "kval_test_support.hpp"

namespace kval {
namespace {

Eigen::MatrixXd random_spd(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = z(rng);
  Eigen::MatrixXd a = g * g.transpose() / static_cast<double>(n);
  a.diagonal().array() += 0.05;
  return a;
}

// A GP predictive distribution at m test points, as produced in practice.
Prediction gp_prediction(std::mt19937_64& rng, Eigen::Index m) {
  auto inst = testing::random_instance(rng, KernelFamily::Matern15, 25, m);
  return predict(fit(inst.kernel, inst.mean, inst.data), inst.test);
}

// observed ~ N(mean, covariance).
Eigen::VectorXd draw_from(std::mt19937_64& rng, const Prediction& p) {
  const Eigen::LLT<Eigen::MatrixXd> llt(p.covariance);
  std::normal_distribution<double> z;
  Eigen::VectorXd u(p.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = z(rng);
  return p.mean + llt.matrixL() * u;
}

std::vector<double> beta_draws(std::mt19937_64& rng, double a, double b, int n) {
  std::gamma_distribution<double> ga(a, 1.0), gb(b, 1.0);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (auto& v : out) {
    const double x = ga(rng), y = gb(rng);
    v = x / (x + y);
  }
  return out;
}

TEST(Mahalanobis, ZeroResidual) {
  const Prediction p{Eigen::Vector3d(1.0, 2.0, 3.0), Eigen::Matrix3d::Identity() * 2.0};
  const auto r = mahalanobis(p, p.mean);
  EXPECT_EQ(r.chi2, 0.0);
  EXPECT_EQ(r.dof, 3);
}

TEST(Mahalanobis, IdentityCovarianceIsSumOfSquares) {
  const Prediction p{Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity()};
  EXPECT_DOUBLE_EQ(mahalanobis(p, Eigen::Vector2d(3.0, 4.0)).chi2, 25.0);
}

TEST(Mahalanobis, MatchesExplicitInverseOracle) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd k = random_spd(rng, 6);
    Prediction p{Eigen::VectorXd::Zero(6), k};
    const Eigen::VectorXd r = Eigen::VectorXd::Random(6);
    const testing::MatrixL inv = k.cast<long double>().fullPivLu().inverse();
    const testing::VectorL rl = r.cast<long double>();
    const double oracle = static_cast<double>(rl.dot(inv * rl));
    EXPECT_NEAR(mahalanobis(p, r).chi2 / oracle, 1.0, 1e-9);
  }
}

TEST(Mahalanobis, InvariantUnderSimultaneousPermutation) {
  std::mt19937_64 rng(62);
  const Eigen::MatrixXd k = random_spd(rng, 8);
  const Eigen::VectorXd r = Eigen::VectorXd::Random(8);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(8);
  perm.indices() << 3, 0, 7, 1, 6, 2, 5, 4;
  const Prediction a{Eigen::VectorXd::Zero(8), k};
  const Prediction b{Eigen::VectorXd::Zero(8), perm * k * perm.transpose()};
  EXPECT_NEAR(mahalanobis(a, r).chi2, mahalanobis(b, perm * r).chi2, 1e-10 * mahalanobis(a, r).chi2);
}

TEST(Mahalanobis, SingularCovarianceReportsSmallestEigenvalue) {
  Eigen::Matrix2d k;
  k << 1.0, 0.0, 0.0, -1.0;
  const Prediction p{Eigen::Vector2d::Zero(), k};
  try {
    mahalanobis(p, Eigen::Vector2d(1.0, 1.0));
    FAIL() << "expected SingularCovarianceError";
  } catch (const SingularCovarianceError& e) {
    EXPECT_NEAR(e.smallest_eigenvalue(), -1.0, 1e-15);
  }
}

TEST(Mahalanobis, LengthMismatch) {
  const Prediction p{Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity()};
  EXPECT_THROW(mahalanobis(p, Eigen::Vector3d::Zero()), DimensionMismatchError);
}

TEST(NormalModes, DiagonalCovariance) {
  Eigen::Matrix2d k;
  k << 4.0, 0.0, 0.0, 9.0;
  const Prediction p{Eigen::Vector2d::Zero(), k};
  const NormalModeResiduals r = normal_mode_residuals(p, Eigen::Vector2d(2.0, 3.0));
  EXPECT_EQ(r.eigenvalues, Eigen::Vector2d(9.0, 4.0));
  for (Eigen::Index k2 = 0; k2 < 2; ++k2) {
    EXPECT_NEAR(std::abs(r.standardized(k2)), 1.0, 1e-15);
    const double expected = specfn::normal_survival(r.standardized(k2));
    EXPECT_EQ(r.survival_probs(k2), expected);
    EXPECT_TRUE(std::abs(expected - specfn::normal_survival(1.0)) < 1e-15 ||
                std::abs(expected - specfn::normal_survival(-1.0)) < 1e-15);
  }
}

TEST(NormalModes, ZeroResidualGivesHalf) {
  std::mt19937_64 rng(63);
  const Prediction p = gp_prediction(rng, 10);
  const NormalModeResiduals r = normal_mode_residuals(p, p.mean);
  EXPECT_TRUE((r.standardized.array() == 0.0).all());
  EXPECT_TRUE((r.survival_probs.array() == 0.5).all());
}

TEST(NormalModes, InvariantsHold) {
  std::mt19937_64 rng(64);
  const Prediction p = gp_prediction(rng, 30);
  const NormalModeResiduals r = normal_mode_residuals(p, draw_from(rng, p));
  ASSERT_EQ(r.dropped_modes, 0);
  ASSERT_EQ(r.standardized.size(), 30);
  for (Eigen::Index k = 0; k < 30; ++k) {
    EXPECT_GT(r.eigenvalues(k), 0.0);
    EXPECT_DOUBLE_EQ(r.standardized(k), r.rotated_residuals(k) / std::sqrt(r.eigenvalues(k)));
    EXPECT_EQ(r.survival_probs(k), specfn::normal_survival(r.standardized(k)));
    if (k > 0) EXPECT_LE(r.eigenvalues(k), r.eigenvalues(k - 1));
  }
}

TEST(NormalModes, RotationIdentityAndOrthogonality) {
  std::mt19937_64 rng(65);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng() % 99);
    const Prediction p{Eigen::VectorXd::Zero(m), random_spd(rng, m)};
    const Eigen::VectorXd observed = draw_from(rng, p);
    const NormalModeResiduals r = normal_mode_residuals(p, observed);
    const double chi2 = mahalanobis(p, observed).chi2;
    EXPECT_NEAR(r.standardized.squaredNorm() / chi2, 1.0, 1e-8) << "m=" << m;
    const Eigen::MatrixXd gram = r.rotation.transpose() * r.rotation;
    EXPECT_LT((gram - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(NormalModes, ScaleEquivariance) {
  std::mt19937_64 rng(66);
  const Prediction p = gp_prediction(rng, 20);
  const Eigen::VectorXd observed = draw_from(rng, p);
  for (double c : {1e-3, 0.5, 7.0, 1e3}) {
    Prediction scaled{p.mean * c, p.covariance * (c * c)};
    const Eigen::VectorXd scaled_obs = observed * c;
    const auto a = normal_mode_residuals(p, observed);
    const auto b = normal_mode_residuals(scaled, scaled_obs);
    EXPECT_NEAR(mahalanobis(p, observed).chi2, mahalanobis(scaled, scaled_obs).chi2,
                1e-10 * mahalanobis(p, observed).chi2);
    // The eigenvector sign is arbitrary; compare through |e_k|.
    for (Eigen::Index k = 0; k < a.standardized.size(); ++k) {
      EXPECT_NEAR(std::abs(a.standardized(k)), std::abs(b.standardized(k)), 1e-10);
      const double pa = a.survival_probs(k), pb = b.survival_probs(k);
      EXPECT_NEAR(std::min(pa, 1.0 - pa), std::min(pb, 1.0 - pb), 1e-10);
    }
  }
}

TEST(NormalModes, CalibratedUnderCorrectModel) {
  // A-squared critical value for a fully specified normal at the 1% level
  // is 3.857 (Stephens 1974).
  std::mt19937_64 rng(67);
  const Prediction p = gp_prediction(rng, 80);
  int ad_pass = 0, ks_pass = 0;
  const int replicates = 1000;
  for (int rep = 0; rep < replicates; ++rep) {
    const NormalModeResiduals r = normal_mode_residuals(p, draw_from(rng, p));
    std::vector<double> e(r.standardized.data(), r.standardized.data() + r.standardized.size());
    std::sort(e.begin(), e.end());
    const double a2 = boost::math::statistics::anderson_darling_normality_statistic(e, 0.0, 1.0);
    ad_pass += a2 < 3.857 ? 1 : 0;
    std::vector<double> pk(r.survival_probs.data(), r.survival_probs.data() + r.survival_probs.size());
    ks_pass += testing::ks_uniform_p_value(pk) > 0.01 ? 1 : 0;
  }
  EXPECT_GE(ad_pass, 970);
  EXPECT_GE(ks_pass, 970);
}

TEST(NormalModes, NearNullModesAreDropped) {
  // Rank-two covariance in three dimensions.
  Eigen::Matrix3d k;
  k << 1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 2.0;
  const Prediction p{Eigen::Vector3d::Zero(), k};
  const NormalModeResiduals r = normal_mode_residuals(p, Eigen::Vector3d(0.5, 0.5, 1.0));
  EXPECT_EQ(r.dropped_modes, 1);
  EXPECT_EQ(r.standardized.size(), 2);
  const ValidationReport report = validate(p, Eigen::Vector3d(0.5, 0.5, 1.0));
  EXPECT_TRUE(report.modes_dropped);
  EXPECT_EQ(report.dof, 2);
  // d = (1/sqrt2, 1) on modes with eigenvalue 2: chi2 = 0.25 + 0.5.
  EXPECT_NEAR(report.mahalanobis, 0.75, 1e-12);
}

TEST(BetaMle, UniformDrawsRecoverOneOne) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(10000);
  for (auto& v : p) v = u(rng);
  const BetaFit fit = beta_mle(p);
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.a_hat, 1.0, 0.05);
  EXPECT_NEAR(fit.b_hat, 1.0, 0.05);
}

TEST(BetaMle, BetaTwoFiveDrawsRecoverParameters) {
  std::mt19937_64 rng(72);
  const BetaFit fit = beta_mle(beta_draws(rng, 2.0, 5.0, 10000));
  EXPECT_NEAR(fit.a_hat, 2.0, 0.15);
  EXPECT_NEAR(fit.b_hat, 5.0, 0.15);
}

TEST(BetaMle, ReflectionSwapsParameters) {
  std::mt19937_64 rng(73);
  const std::vector<double> p = beta_draws(rng, 0.7, 1.6, 300);
  std::vector<double> q(p.size());
  std::transform(p.begin(), p.end(), q.begin(), [](double v) { return 1.0 - v; });
  const BetaFit a = beta_mle(p), b = beta_mle(q);
  EXPECT_NEAR(a.a_hat, b.b_hat, 1e-6);
  EXPECT_NEAR(a.b_hat, b.a_hat, 1e-6);
}

TEST(BetaMle, NeverWorseThanUniformAndLocallyMaximal) {
  std::mt19937_64 rng(74);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = testing::log_uniform(rng, 0.3, 4.0), b = testing::log_uniform(rng, 0.3, 4.0);
    const int n = 2 + static_cast<int>(rng() % 100);
    const std::vector<double> p = beta_draws(rng, a, b, n);
    const BetaFit fit = beta_mle(p);
    if (fit.degenerate) continue;
    const auto stats = BetaSufficientStats::from(p);
    EXPECT_GE(fit.max_log_likelihood, stats.log_likelihood(1.0, 1.0));
    EXPECT_NEAR(fit.max_log_likelihood, stats.log_likelihood(fit.a_hat, fit.b_hat), 1e-9);
    const double ll = fit.max_log_likelihood;
    const double tol = 1e-9 * std::max(1.0, std::abs(ll));
    for (double f : {0.999, 1.001}) {
      EXPECT_LE(stats.log_likelihood(fit.a_hat * f, fit.b_hat), ll + tol);
      EXPECT_LE(stats.log_likelihood(fit.a_hat, fit.b_hat * f), ll + tol);
    }
  }
}

TEST(BetaMle, SufficientStatisticsMatchDirectSum) {
  std::mt19937_64 rng(75);
  const std::vector<double> p = beta_draws(rng, 1.3, 0.8, 80);
  const auto stats = BetaSufficientStats::from(p);
  for (auto [a, b] : {std::pair{0.5, 0.5}, std::pair{1.0, 1.0}, std::pair{2.2, 0.9}}) {
    EXPECT_NEAR(stats.log_likelihood(a, b), beta_log_likelihood(p, a, b), 1e-10);
  }
}

TEST(BetaMle, DegenerateAndTooSmallInputs) {
  const std::vector<double> same(10, 0.5);
  const BetaFit fit = beta_mle(same);
  EXPECT_TRUE(fit.degenerate);
  EXPECT_TRUE(std::isnan(fit.a_hat));
  EXPECT_THROW(beta_mle(std::vector<double>{0.3}), InvalidArgumentError);
}

TEST(BetaPosterior, MassSumsToOneAndModeCoverageIsZero) {
  std::mt19937_64 rng(81);
  const BetaPosterior post = beta_posterior(beta_draws(rng, 0.8, 1.1, 80));
  EXPECT_NEAR(post.cell_mass.sum(), 1.0, 1e-12);
  EXPECT_GE(post.cell_mass.minCoeff(), 0.0);
  Eigen::Index i = 0, j = 0;
  post.log_density.maxCoeff(&i, &j);
  EXPECT_EQ(iso_posterior_coverage(post, post.a_grid(i), post.b_grid(j)), 0.0);
  // Density integrates to one over the grid.
  EXPECT_NEAR(post.log_density.array().exp().sum() * post.cell_area(), 1.0, 1e-12);
}

TEST(BetaPosterior, SinglePointMatchesDirectEvaluation) {
  PosteriorGridConfig grid{0.5, 1.5, 0.5, 1.5, 50, 50};
  const BetaPosterior post = beta_posterior(std::vector<double>{0.5}, grid);
  double total = 0.0;
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j)
      total += std::exp(specfn::log_beta_density(0.5, post.a_grid(i), post.b_grid(j)));
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      const double direct = std::exp(specfn::log_beta_density(0.5, post.a_grid(i), post.b_grid(j))) / total;
      EXPECT_NEAR(post.cell_mass(i, j) / direct, 1.0, 1e-12);
    }
  }
}

TEST(BetaPosterior, FlatLikelihoodGivesUniformMass) {
  const BetaPosterior post =
      beta_posterior_from_log_likelihood(PosteriorGridConfig{}, [](double, double) { return -3.0; });
  const double expected = 1.0 / (300.0 * 300.0);
  EXPECT_LT((post.cell_mass.array() - expected).abs().maxCoeff(), 1e-18);
}

TEST(BetaPosterior, UniformSamplesPutOneOneAboveMedianDensity) {
  std::mt19937_64 rng(82);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int seed = 0; seed < 40; ++seed) {
    std::vector<double> p(80);
    for (auto& v : p) v = u(rng);
    const BetaPosterior post = beta_posterior(p);
    std::vector<double> d(post.log_density.data(), post.log_density.data() + post.log_density.size());
    const double med = testing::median(d);
    const auto [i, j] = post.locate(1.0, 1.0);
    EXPECT_GE(post.log_density(i, j), med) << "seed " << seed;
  }
}

TEST(BetaPosterior, MleOutsideGridAsksToWiden) {
  std::mt19937_64 rng(83);
  EXPECT_THROW(beta_posterior(beta_draws(rng, 6.0, 6.0, 400)), WidenGridError);
}

TEST(BetaPosterior, LocateRejectsOutsidePoints) {
  std::mt19937_64 rng(84);
  const BetaPosterior post = beta_posterior(beta_draws(rng, 1.0, 1.0, 50));
  EXPECT_THROW(post.locate(0.01, 1.0), OutsideGridError);
  EXPECT_THROW(iso_posterior_coverage(post, 1.0, 3.5), OutsideGridError);
}

TEST(BetaPosterior, GridValidation) {
  EXPECT_THROW((PosteriorGridConfig{1.0, 0.5, 0.05, 3.0, 300, 300}.validate()), InvalidArgumentError);
  EXPECT_THROW((PosteriorGridConfig{0.05, 3.0, 0.05, 3.0, 10, 300}.validate()), InvalidArgumentError);
}

// 3 x 3 posterior with masses in units of 1/64 so every partial sum is exact.
BetaPosterior hand_built_posterior() {
  BetaPosterior post;
  post.grid = {0.0, 3.0, 0.0, 3.0, 3, 3};
  post.a_grid = Eigen::Vector3d(0.5, 1.5, 2.5);
  post.b_grid = Eigen::Vector3d(0.5, 1.5, 2.5);
  post.cell_mass.resize(3, 3);
  post.cell_mass << 3, 6, 1, 13, 19, 5, 6, 6, 5;
  post.cell_mass /= 64.0;
  post.log_density = (post.cell_mass / post.cell_area()).array().log();
  return post;
}

TEST(IsoPosteriorCoverage, HandBuiltGridMatchesEnumeration) {
  const BetaPosterior post = hand_built_posterior();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double expected = 0.0;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          if (post.cell_mass(k, l) > post.cell_mass(i, j)) expected += post.cell_mass(k, l);
      EXPECT_EQ(iso_posterior_coverage(post, post.a_grid(i), post.b_grid(j)), expected)
          << i << "," << j;
    }
  }
  // Spot values: the mode, the tied 6/64 cells, and the minimum cell.
  EXPECT_EQ(iso_posterior_coverage(post, 1.5, 1.5), 0.0);
  EXPECT_EQ(iso_posterior_coverage(post, 0.5, 1.5), 32.0 / 64.0);
  EXPECT_EQ(iso_posterior_coverage(post, 0.5, 2.5), 63.0 / 64.0);
}

TEST(IsoPosteriorCoverage, MinimumCellExcludesTiedMass) {
  BetaPosterior post = hand_built_posterior();
  post.cell_mass << 4, 6, 1, 13, 18, 5, 6, 10, 1;
  post.cell_mass /= 64.0;
  post.log_density = (post.cell_mass / post.cell_area()).array().log();
  EXPECT_EQ(iso_posterior_coverage(post, 0.5, 2.5), 1.0 - 2.0 / 64.0);
}

TEST(IsoPosteriorCoverage, NonIncreasingInDensity) {
  std::mt19937_64 rng(85);
  const BetaPosterior post = beta_posterior(beta_draws(rng, 0.9, 1.2, 20), {0.05, 3.0, 0.05, 3.0, 60, 60});
  std::vector<std::pair<double, double>> pairs;
  for (int i = 0; i < 60; ++i)
    for (int j = 0; j < 60; ++j)
      pairs.emplace_back(post.log_density(i, j), iso_posterior_coverage(post, post.a_grid(i), post.b_grid(j)));
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t k = 1; k < pairs.size(); ++k) EXPECT_LE(pairs[k].second, pairs[k - 1].second);
}

TEST(PkHistogram, PointMassAtHalf) {
  const std::vector<double> p(80, 0.5);
  const PkHistogram h = pk_histogram(p);
  for (int k = 0; k < 10; ++k) EXPECT_EQ(h.density(k), k == 5 ? 10.0 : 0.0) << k;
  EXPECT_EQ(h.bin_left(5), 0.5);
}

TEST(PkHistogram, CountsMatchIndependentCounter) {
  std::mt19937_64 rng(86);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(80);
  for (auto& v : p) v = u(rng);
  p[0] = 1.0;  // closed last bin
  p[1] = 0.0;
  const PkHistogram h = pk_histogram(p);
  for (int k = 0; k < 10; ++k) {
    const double lo = k / 10.0, hi = (k + 1) / 10.0;
    int expected = 0;
    for (double v : p) expected += (v >= lo && (v < hi || (k == 9 && v == 1.0))) ? 1 : 0;
    EXPECT_EQ(h.counts(k), expected) << k;
  }
  EXPECT_NEAR(h.density.sum() * 0.1, 1.0, 1e-9);
}

TEST(PkHistogram, EmptyInputIsAnError) {
  EXPECT_THROW(pk_histogram(std::vector<double>{}), InvalidArgumentError);
}

TEST(Validate, ZeroResidualIsDegenerate) {
  std::mt19937_64 rng(91);
  const Prediction p = gp_prediction(rng, 12);
  const ValidationReport r = validate(p, p.mean);
  EXPECT_EQ(r.mahalanobis, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_TRUE((r.residuals.survival_probs.array() == 0.5).all());
  EXPECT_TRUE(r.beta_fit.degenerate);
}

TEST(Validate, ReportFieldsAreMutuallyConsistent) {
  std::mt19937_64 rng(92);
  const Prediction p = gp_prediction(rng, 40);
  const ValidationReport r = validate(p, draw_from(rng, p));
  EXPECT_EQ(r.dof, 40);
  EXPECT_EQ(r.p_value, specfn::chi2_survival(r.mahalanobis, r.dof));
  EXPECT_EQ(r.uniform_coverage, iso_posterior_coverage(r.posterior, 1.0, 1.0));
  EXPECT_NEAR(r.residuals.standardized.squaredNorm() / r.mahalanobis, 1.0, 1e-8);
  EXPECT_NEAR(r.posterior.cell_mass.sum(), 1.0, 1e-12);
}

TEST(Validate, WellSpecifiedPValuesStayInsideExtremes) {
  std::mt19937_64 rng(93);
  const Prediction p = gp_prediction(rng, 80);
  int inside = 0;
  for (int rep = 0; rep < 500; ++rep) {
    const ValidationReport r = validate(p, draw_from(rng, p));
    inside += (r.p_value > 0.001 && r.p_value < 0.999) ? 1 : 0;
  }
  EXPECT_GE(inside, 495);
}

TEST(Validate, GridWidensAroundConcentratedPosterior) {
  // Residuals shrunk by a factor of three give p_k piled around 0.5, so the
  // Beta MLE has a, b well above the default grid's upper edge.
  std::mt19937_64 rng(94);
  const Prediction p = gp_prediction(rng, 80);
  Eigen::VectorXd observed = p.mean + (draw_from(rng, p) - p.mean) / 3.0;
  const ValidationReport r = validate(p, observed);
  EXPECT_GT(r.grid_widenings, 0);
  EXPECT_GT(r.posterior.grid.a_max, 3.0);
  EXPECT_LE(r.beta_fit.a_hat, r.posterior.grid.a_max);
  EXPECT_LE(r.beta_fit.b_hat, r.posterior.grid.b_max);
  EXPECT_GT(r.uniform_coverage, 0.99);
}

}  // namespace
}  // namespace kval

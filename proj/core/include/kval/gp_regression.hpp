#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "kval/cholesky.hpp"
#include "kval/kernels.hpp"
#include "kval/nelder_mead.hpp"

namespace kval {

/// Observations (X, f) with known per-point noise variances.
struct Dataset {
  Points inputs;                    // N x D
  Eigen::VectorXd values;           // N
  Eigen::VectorXd noise_variances;  // N, >= 0

  Eigen::Index size() const noexcept { return values.size(); }
  Eigen::Index dimension() const noexcept { return inputs.cols(); }

  /// Throws InvalidArgumentError on length mismatch, negative noise, or
  /// non-finite entries.
  void validate() const;
};

/// Copy of `data` with `extra_variance` added to every noise variance.
Dataset with_added_noise(const Dataset& data, double extra_variance);

/// Predictive mean and full covariance at a set of test inputs.
struct Prediction {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;

  Eigen::Index size() const noexcept { return mean.size(); }
};

/// Predictive mean and marginal variances only.
struct MarginalPrediction {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
};

/// A GP conditioned on a training set. Immutable once built; the Cholesky
/// factor of (K + N + jitter I) and the weight vector (K + N)^-1 (f - mu) are
/// cached.
class FittedGP {
 public:
  FittedGP(KernelSpec kernel, MeanSpec mean, Dataset training_data, JitteredCholesky factor,
           Eigen::VectorXd weights);

  const KernelSpec& kernel() const noexcept { return kernel_; }
  const MeanSpec& mean() const noexcept { return mean_; }
  const Dataset& training_data() const noexcept { return data_; }
  const JitteredCholesky& factor() const noexcept { return factor_; }
  const Eigen::MatrixXd& chol() const noexcept { return factor_.lower; }
  double jitter() const noexcept { return factor_.jitter; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }

 private:
  KernelSpec kernel_;
  MeanSpec mean_;
  Dataset data_;
  JitteredCholesky factor_;
  Eigen::VectorXd weights_;
};

/// Builds (K + N), factorizes it (bare first, then up the default jitter
/// ladder) and caches the result. Duplicate inputs that both carry zero noise make the Gram matrix
/// singular and raise IllConditionedError.
FittedGP fit(const KernelSpec& kernel, const MeanSpec& mean, const Dataset& data);

/// Conditions the GP on its training data:
///   mean = mu* + K* (K + N)^-1 (f - mu)
///   cov  = K** - K* (K + N)^-1 K*^T
/// Diagonal entries in [-1e-10 sigma^2, 0) are clipped to 0; anything more
/// negative raises NumericalError.
Prediction predict(const FittedGP& model, const Points& test_inputs);

MarginalPrediction predict_marginal(const FittedGP& model, const Points& test_inputs);

/// Adds independent observation noise to the predictive covariance, turning a
/// prediction of the latent function into a prediction of noisy measurements.
void add_observation_noise(Prediction& prediction, const Eigen::VectorXd& noise_variances);

/// log N(f | mu, K + N).
double log_marginal_likelihood(const KernelSpec& kernel, const MeanSpec& mean, const Dataset& data);

/// Partial derivatives of the log marginal likelihood with respect to the
/// log-hyperparameters.
struct LmlGradient {
  double d_log_signal_variance = 0.0;
  double d_log_length_scale = 0.0;
  /// With respect to the log of a homoscedastic noise variance that has
  /// already been folded into `data`; zero when that variance is zero.
  double d_log_noise_variance = 0.0;
};

struct LmlWithGradient {
  double value = 0.0;
  LmlGradient gradient;
};

LmlWithGradient log_marginal_likelihood_with_gradient(const KernelSpec& kernel, const MeanSpec& mean,
                                                      const Dataset& data,
                                                      double homoscedastic_noise_variance = 0.0);

struct TrainOptions {
  int restarts = 5;
  std::uint64_t seed = 0;
  /// Fit an extra homoscedastic noise variance on top of the known per-point
  /// noise.
  bool train_noise = false;
  NelderMeadOptions optimizer{2000, 1e-9, 1e-6, 0.5};
};

struct TrainResult {
  KernelSpec kernel;
  double log_likelihood = 0.0;
  /// Trained homoscedastic noise variance; 0 unless TrainOptions::train_noise.
  double noise_variance = 0.0;
  /// True when the optimum sits on a box bound of the search domain.
  bool hit_bound = false;
  int converged_restarts = 0;
  int failed_restarts = 0;
};

/// Search box and restart distribution for training, expressed as multiples of
/// the input range and the sample variance of the values.
struct TrainingDomain {
  double length_scale_min = 0.0, length_scale_max = 0.0;
  double signal_variance_min = 0.0, signal_variance_max = 0.0;
  double noise_variance_min = 0.0, noise_variance_max = 0.0;
  double start_length_scale_min = 0.0, start_length_scale_max = 0.0;
  double start_signal_variance_min = 0.0, start_signal_variance_max = 0.0;
};

TrainingDomain training_domain(const Dataset& data);

/// Multi-start Nelder-Mead maximization of the log marginal likelihood over
/// log-hyperparameters. Deterministic for a given seed. Throws
/// TrainingFailureError when no restart reaches a finite likelihood.
TrainResult train(KernelFamily family, const MeanSpec& mean, const Dataset& data,
                  const TrainOptions& options = {});

}  // namespace kval

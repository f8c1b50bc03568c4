#include "kval/gp_regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "kval/errors.hpp"

namespace kval {

namespace {

constexpr double kNegativeVarianceTolerance = 1e-10;

void check_zero_noise_duplicates(const Dataset& data) {
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (data.noise_variances(i) != 0.0) continue;
    for (Eigen::Index j = i + 1; j < data.size(); ++j) {
      if (data.noise_variances(j) == 0.0 && data.inputs.row(i) == data.inputs.row(j)) {
        std::ostringstream msg;
        msg << "singular Gram matrix: inputs " << i << " and " << j
            << " coincide and both have zero noise";
        throw IllConditionedError(msg.str(), 0.0);
      }
    }
  }
}

Eigen::MatrixXd noisy_gram(const KernelSpec& kernel, const Dataset& data) {
  Eigen::MatrixXd k = gram_matrix(kernel, data.inputs);
  k.diagonal() += data.noise_variances;
  return k;
}

Eigen::VectorXd centered_values(const MeanSpec& mean, const Dataset& data) {
  return data.values.array() - mean.constant;
}

void clip_variance(double& v, double signal_variance) {
  if (v >= 0.0) return;
  if (v >= -kNegativeVarianceTolerance * signal_variance) {
    v = 0.0;
    return;
  }
  std::ostringstream msg;
  msg << "predictive variance " << v << " is below the clipping tolerance";
  throw NumericalError(msg.str());
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::log(lo) + uniform01(rng) * (std::log(hi) - std::log(lo));
}

}  // namespace

void Dataset::validate() const {
  if (inputs.rows() != values.size() || values.size() != noise_variances.size()) {
    throw InvalidArgumentError("dataset: inputs, values and noise_variances differ in length");
  }
  if (!inputs.allFinite() || !values.allFinite() || !noise_variances.allFinite()) {
    throw InvalidArgumentError("dataset: non-finite entry");
  }
  if ((noise_variances.array() < 0.0).any()) {
    throw InvalidArgumentError("dataset: negative noise variance");
  }
}

Dataset with_added_noise(const Dataset& data, double extra_variance) {
  Dataset out = data;
  out.noise_variances.array() += extra_variance;
  return out;
}

FittedGP::FittedGP(KernelSpec kernel, MeanSpec mean, Dataset training_data, JitteredCholesky factor,
                   Eigen::VectorXd weights)
    : kernel_(kernel),
      mean_(mean),
      data_(std::move(training_data)),
      factor_(std::move(factor)),
      weights_(std::move(weights)) {}

FittedGP fit(const KernelSpec& kernel, const MeanSpec& mean, const Dataset& data) {
  kernel.validate();
  data.validate();
  check_zero_noise_duplicates(data);
  JitterLadder ladder;
  ladder.try_zero_first = true;
  JitteredCholesky factor = cholesky_with_jitter(noisy_gram(kernel, data), ladder);
  Eigen::VectorXd weights = factor.solve(centered_values(mean, data));
  return FittedGP(kernel, mean, data, std::move(factor), std::move(weights));
}

Prediction predict(const FittedGP& model, const Points& test_inputs) {
  const Dataset& data = model.training_data();
  if (test_inputs.cols() != data.dimension()) {
    throw DimensionMismatchError("predict: test inputs have dimension " +
                                 std::to_string(test_inputs.cols()) + ", training data " +
                                 std::to_string(data.dimension()));
  }
  const Eigen::MatrixXd k_star = gram_matrix(model.kernel(), test_inputs, data.inputs);  // M x N
  Prediction out;
  out.mean = (k_star * model.weights()).array() + model.mean().constant;

  // V = L^-1 K*^T, so K* (K + N)^-1 K*^T = V^T V.
  const Eigen::MatrixXd v =
      model.chol().triangularView<Eigen::Lower>().solve(k_star.transpose());
  out.covariance = gram_matrix(model.kernel(), test_inputs);
  out.covariance.noalias() -= v.transpose() * v;
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  for (Eigen::Index i = 0; i < out.covariance.rows(); ++i) {
    clip_variance(out.covariance(i, i), model.kernel().signal_variance);
  }
  return out;
}

MarginalPrediction predict_marginal(const FittedGP& model, const Points& test_inputs) {
  const Dataset& data = model.training_data();
  if (test_inputs.cols() != data.dimension()) {
    throw DimensionMismatchError("predict_marginal: dimension mismatch");
  }
  const Eigen::MatrixXd k_star = gram_matrix(model.kernel(), test_inputs, data.inputs);
  MarginalPrediction out;
  out.mean = (k_star * model.weights()).array() + model.mean().constant;
  const Eigen::MatrixXd v =
      model.chol().triangularView<Eigen::Lower>().solve(k_star.transpose());
  out.variance = model.kernel().signal_variance - v.colwise().squaredNorm().transpose().array();
  for (Eigen::Index i = 0; i < out.variance.size(); ++i) {
    clip_variance(out.variance(i), model.kernel().signal_variance);
  }
  return out;
}

void add_observation_noise(Prediction& prediction, const Eigen::VectorXd& noise_variances) {
  if (noise_variances.size() != prediction.size()) {
    throw DimensionMismatchError("add_observation_noise: length mismatch");
  }
  prediction.covariance.diagonal() += noise_variances;
}

double log_marginal_likelihood(const KernelSpec& kernel, const MeanSpec& mean, const Dataset& data) {
  const FittedGP model = fit(kernel, mean, data);
  const Eigen::VectorXd r = centered_values(mean, data);
  const double n = static_cast<double>(data.size());
  return -0.5 * r.dot(model.weights()) - 0.5 * model.factor().log_determinant() -
         0.5 * n * std::log(2.0 * std::numbers::pi);
}

LmlWithGradient log_marginal_likelihood_with_gradient(const KernelSpec& kernel, const MeanSpec& mean,
                                                      const Dataset& data,
                                                      double homoscedastic_noise_variance) {
  const FittedGP model = fit(kernel, mean, data);
  const Eigen::VectorXd r = centered_values(mean, data);
  const double n = static_cast<double>(data.size());

  LmlWithGradient out;
  out.value = -0.5 * r.dot(model.weights()) - 0.5 * model.factor().log_determinant() -
              0.5 * n * std::log(2.0 * std::numbers::pi);

  // dL/dtheta = 1/2 tr((alpha alpha^T - (K + N)^-1) dK/dtheta)
  const Eigen::MatrixXd inverse =
      model.factor().solve(Eigen::MatrixXd(Eigen::MatrixXd::Identity(data.size(), data.size())));
  const Eigen::MatrixXd w = model.weights() * model.weights().transpose() - inverse;
  const Eigen::MatrixXd dist = pairwise_distances(data.inputs, data.inputs);
  const Eigen::MatrixXd k_signal = gram_matrix(kernel, data.inputs);
  Eigen::MatrixXd dk_dlog_ell(dist.rows(), dist.cols());
  for (Eigen::Index j = 0; j < dist.cols(); ++j) {
    for (Eigen::Index i = 0; i < dist.rows(); ++i) {
      dk_dlog_ell(i, j) = kernel_dlog_length_scale(kernel, dist(i, j));
    }
  }
  out.gradient.d_log_signal_variance = 0.5 * w.cwiseProduct(k_signal).sum();
  out.gradient.d_log_length_scale = 0.5 * w.cwiseProduct(dk_dlog_ell).sum();
  out.gradient.d_log_noise_variance = 0.5 * homoscedastic_noise_variance * w.trace();
  return out;
}

TrainingDomain training_domain(const Dataset& data) {
  double range = 0.0;
  for (Eigen::Index d = 0; d < data.dimension(); ++d) {
    range = std::max(range, data.inputs.col(d).maxCoeff() - data.inputs.col(d).minCoeff());
  }
  if (!(range > 0.0)) range = 1.0;
  double var = 0.0;
  if (data.size() > 1) {
    const double m = data.values.mean();
    var = (data.values.array() - m).square().sum() / static_cast<double>(data.size() - 1);
  }
  if (!(var > 0.0)) var = 1.0;

  TrainingDomain dom;
  dom.length_scale_min = 1e-3 * range;
  dom.length_scale_max = 1e2 * range;
  dom.signal_variance_min = 1e-4 * var;
  dom.signal_variance_max = 1e4 * var;
  dom.noise_variance_min = 1e-8 * var;
  dom.noise_variance_max = 1e2 * var;
  dom.start_length_scale_min = 0.01 * range;
  dom.start_length_scale_max = 10.0 * range;
  dom.start_signal_variance_min = 0.01 * var;
  dom.start_signal_variance_max = 100.0 * var;
  return dom;
}

TrainResult train(KernelFamily family, const MeanSpec& mean, const Dataset& data,
                  const TrainOptions& options) {
  if (options.restarts < 1) throw InvalidArgumentError("train: restarts must be >= 1");
  data.validate();
  if (data.size() < 1) throw InvalidArgumentError("train: empty dataset");

  const TrainingDomain dom = training_domain(data);
  const Eigen::Index n_params = options.train_noise ? 3 : 2;
  Eigen::VectorXd lower(n_params), upper(n_params);
  lower << std::log(dom.signal_variance_min), std::log(dom.length_scale_min),
      std::log(dom.noise_variance_min);
  upper << std::log(dom.signal_variance_max), std::log(dom.length_scale_max),
      std::log(dom.noise_variance_max);
  if (!options.train_noise) {
    lower.conservativeResize(2);
    upper.conservativeResize(2);
  }

  auto spec_of = [family](const Eigen::VectorXd& theta) {
    return KernelSpec{family, std::exp(theta(0)), std::exp(theta(1))};
  };
  auto objective = [&](const Eigen::VectorXd& theta) {
    if ((theta.array() < lower.array()).any() || (theta.array() > upper.array()).any()) {
      return std::numeric_limits<double>::infinity();
    }
    try {
      if (options.train_noise) {
        return -log_marginal_likelihood(spec_of(theta), mean,
                                        with_added_noise(data, std::exp(theta(2))));
      }
      return -log_marginal_likelihood(spec_of(theta), mean, data);
    } catch (const IllConditionedError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  TrainResult best;
  best.log_likelihood = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_theta;
  std::ostringstream diagnostics;
  for (int restart = 0; restart < options.restarts; ++restart) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed & 0xffffffffu),
                      static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    std::mt19937_64 rng(seq);
    Eigen::VectorXd start(n_params);
    start(0) = log_uniform(rng, dom.start_signal_variance_min, dom.start_signal_variance_max);
    start(1) = log_uniform(rng, dom.start_length_scale_min, dom.start_length_scale_max);
    if (options.train_noise) {
      start(2) = log_uniform(rng, dom.noise_variance_min * 1e4, dom.noise_variance_max * 1e-2);
    }
    const NelderMeadResult r = nelder_mead_minimize(objective, start, options.optimizer);
    if (!std::isfinite(r.value)) {
      ++best.failed_restarts;
      diagnostics << " restart " << restart << ": no finite likelihood;";
      continue;
    }
    if (r.converged) ++best.converged_restarts;
    if (-r.value > best.log_likelihood) {
      best.log_likelihood = -r.value;
      best_theta = r.x;
    }
  }
  if (best.failed_restarts == options.restarts) {
    throw TrainingFailureError("train: all " + std::to_string(options.restarts) +
                               " restarts failed;" + diagnostics.str());
  }
  best.kernel = spec_of(best_theta);
  best.noise_variance = options.train_noise ? std::exp(best_theta(2)) : 0.0;
  constexpr double kBoundSlack = 1e-3;
  best.hit_bound = ((best_theta - lower).array() < kBoundSlack).any() ||
                   ((upper - best_theta).array() < kBoundSlack).any();
  return best;
}

}  // namespace kval

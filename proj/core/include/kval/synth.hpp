#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "kval/cholesky.hpp"
#include "kval/gp_regression.hpp"
#include "kval/kernels.hpp"

namespace kval {

/// n equally spaced 1-D points on [lo, hi], as an n x 1 matrix.
Points uniform_grid(double lo, double hi, Eigen::Index n);

/// Draws functions from N(mu(grid), K(grid, grid) + jitter I). The Cholesky
/// factor is computed once, so repeated draws on the same grid are cheap.
class PriorSampler {
 public:
  PriorSampler(const KernelSpec& kernel, const MeanSpec& mean, Points grid);

  Eigen::VectorXd sample(std::uint64_t seed) const;

  const Points& grid() const noexcept { return grid_; }
  const KernelSpec& kernel() const noexcept { return kernel_; }
  const MeanSpec& mean() const noexcept { return mean_; }
  double jitter() const noexcept { return factor_.jitter; }

 private:
  KernelSpec kernel_;
  MeanSpec mean_;
  Points grid_;
  JitteredCholesky factor_;
};

/// One prior draw on `grid`; deterministic given the seed.
Eigen::VectorXd sample_prior_function(const KernelSpec& kernel, const MeanSpec& mean,
                                      const Points& grid, std::uint64_t seed);

/// Noisy observations of a gridded 1-D truth at `at`. Off-grid points are
/// linearly interpolated; points outside the grid hull are rejected.
Dataset make_observations(const Points& grid, const Eigen::VectorXd& truth_values, const Points& at,
                          double noise_sd, std::uint64_t seed);

struct SynthConfig {
  KernelSpec truth_kernel{KernelFamily::Matern15, 1.0, 0.1};
  MeanSpec truth_mean{0.0};
  double domain_min = 0.0;
  double domain_max = 1.0;
  Eigen::Index grid_size = 512;
  Eigen::Index n_train = 40;
  Eigen::Index n_test = 80;
  double noise_sd = 0.05;
};

struct SyntheticExperiment {
  KernelSpec truth_kernel;
  MeanSpec truth_mean;
  Points grid;
  Eigen::VectorXd truth_values;
  Dataset train_set;
  Dataset test_set;
  std::vector<Eigen::Index> train_indices;  // into grid, ascending
  std::vector<Eigen::Index> test_indices;   // into grid, ascending, disjoint from train
  std::uint64_t rng_seed = 0;
};

/// Samples a truth function, places train and test points on distinct grid
/// points (uniformly without replacement) and adds Gaussian noise. Pass a
/// sampler built for the same kernel, mean and grid to skip refactorizing.
SyntheticExperiment make_synthetic_experiment(const SynthConfig& config, std::uint64_t seed,
                                              const PriorSampler* sampler = nullptr);

}  // namespace kval

#include "kval/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "kval/errors.hpp"
#include "kval/random.hpp"

namespace kval {

namespace {

void check_distinct(const Points& grid) {
  for (Eigen::Index i = 0; i < grid.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < grid.rows(); ++j) {
      if (grid.row(i) == grid.row(j)) {
        throw InvalidArgumentError("grid points " + std::to_string(i) + " and " +
                                   std::to_string(j) + " coincide");
      }
    }
  }
}

Eigen::VectorXd standard_normals(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = normal(rng);
  return z;
}

Points gather_rows(const Points& grid, const std::vector<Eigen::Index>& idx) {
  Points out(static_cast<Eigen::Index>(idx.size()), grid.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = grid.row(idx[i]);
  return out;
}

}  // namespace

Points uniform_grid(double lo, double hi, Eigen::Index n) {
  if (n < 1) throw InvalidArgumentError("uniform_grid: need at least one point");
  if (!(hi > lo) && n > 1) throw InvalidArgumentError("uniform_grid: empty interval");
  Points g(n, 1);
  if (n == 1) {
    g(0, 0) = lo;
    return g;
  }
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (Eigen::Index i = 0; i < n; ++i) g(i, 0) = lo + step * static_cast<double>(i);
  g(n - 1, 0) = hi;
  return g;
}

PriorSampler::PriorSampler(const KernelSpec& kernel, const MeanSpec& mean, Points grid)
    : kernel_(kernel), mean_(mean), grid_(std::move(grid)) {
  kernel_.validate();
  check_distinct(grid_);
  factor_ = cholesky_with_jitter(gram_matrix(kernel_, grid_));
}

Eigen::VectorXd PriorSampler::sample(std::uint64_t seed) const {
  auto rng = make_rng(seed, Stream::Truth);
  const Eigen::VectorXd z = standard_normals(rng, grid_.rows());
  Eigen::VectorXd f = factor_.lower.triangularView<Eigen::Lower>() * z;
  f.array() += mean_.constant;
  return f;
}

Eigen::VectorXd sample_prior_function(const KernelSpec& kernel, const MeanSpec& mean,
                                      const Points& grid, std::uint64_t seed) {
  return PriorSampler(kernel, mean, grid).sample(seed);
}

Dataset make_observations(const Points& grid, const Eigen::VectorXd& truth_values, const Points& at,
                          double noise_sd, std::uint64_t seed) {
  if (grid.cols() != 1 || at.cols() != 1) {
    throw DimensionMismatchError("make_observations: only 1-D grids are supported");
  }
  if (grid.rows() != truth_values.size() || grid.rows() < 1) {
    throw InvalidArgumentError("make_observations: grid and truth lengths differ");
  }
  if (!(std::isfinite(noise_sd) && noise_sd > 0.0)) {
    throw InvalidArgumentError("make_observations: noise_sd must be positive");
  }
  const Eigen::VectorXd xs = grid.col(0);
  for (Eigen::Index i = 1; i < xs.size(); ++i) {
    if (!(xs(i) > xs(i - 1))) {
      throw InvalidArgumentError("make_observations: grid must be strictly increasing");
    }
  }

  Dataset out;
  out.inputs = at;
  out.values.resize(at.rows());
  out.noise_variances = Eigen::VectorXd::Constant(at.rows(), noise_sd * noise_sd);
  for (Eigen::Index k = 0; k < at.rows(); ++k) {
    const double x = at(k, 0);
    if (x < xs(0) || x > xs(xs.size() - 1)) {
      throw InvalidArgumentError("make_observations: point " + std::to_string(x) +
                                 " lies outside the grid hull");
    }
    const auto it = std::lower_bound(xs.data(), xs.data() + xs.size(), x);
    const Eigen::Index hi = it - xs.data();
    if (xs(hi) == x) {
      out.values(k) = truth_values(hi);
    } else {
      const Eigen::Index lo = hi - 1;
      const double t = (x - xs(lo)) / (xs(hi) - xs(lo));
      out.values(k) = (1.0 - t) * truth_values(lo) + t * truth_values(hi);
    }
  }
  auto rng = make_rng(seed, 0u);
  out.values += noise_sd * standard_normals(rng, at.rows());
  return out;
}

SyntheticExperiment make_synthetic_experiment(const SynthConfig& config, std::uint64_t seed,
                                              const PriorSampler* sampler) {
  if (config.n_train < 1 || config.n_test < 1) {
    throw InvalidArgumentError("synthetic experiment needs n_train >= 1 and n_test >= 1");
  }
  if (config.n_train + config.n_test > config.grid_size) {
    throw InvalidArgumentError("n_train + n_test exceeds the number of grid points");
  }

  SyntheticExperiment ex;
  ex.truth_kernel = config.truth_kernel;
  ex.truth_mean = config.truth_mean;
  ex.rng_seed = seed;
  if (sampler != nullptr) {
    ex.grid = sampler->grid();
    ex.truth_values = sampler->sample(seed);
  } else {
    ex.grid = uniform_grid(config.domain_min, config.domain_max, config.grid_size);
    ex.truth_values = PriorSampler(config.truth_kernel, config.truth_mean, ex.grid).sample(seed);
  }

  // Partial Fisher-Yates: the first n_train + n_test entries are a uniform
  // sample without replacement.
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(ex.grid.rows()));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  auto placement = make_rng(seed, Stream::Placement);
  const auto n_pick = static_cast<std::size_t>(config.n_train + config.n_test);
  for (std::size_t i = 0; i < n_pick; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, perm.size() - 1);
    std::swap(perm[i], perm[pick(placement)]);
  }
  const auto n_train = static_cast<std::size_t>(config.n_train);
  ex.train_indices.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  ex.test_indices.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train),
                         perm.begin() + static_cast<std::ptrdiff_t>(n_pick));
  std::sort(ex.train_indices.begin(), ex.train_indices.end());
  std::sort(ex.test_indices.begin(), ex.test_indices.end());

  const auto draw_noise = [&](Stream s) { return make_rng(seed, s)(); };
  ex.train_set = make_observations(ex.grid, ex.truth_values, gather_rows(ex.grid, ex.train_indices),
                                   config.noise_sd, draw_noise(Stream::TrainNoise));
  ex.test_set = make_observations(ex.grid, ex.truth_values, gather_rows(ex.grid, ex.test_indices),
                                  config.noise_sd, draw_noise(Stream::TestNoise));
  return ex;
}

}  // namespace kval

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "kval/gp_regression.hpp"
#include "kval/synth.hpp"
#include "kval/validation.hpp"

namespace {

struct Problem {
  kval::Prediction prediction;
  Eigen::VectorXd observed;
};

// Predictive distribution of a Matern 3/2 model at m held-out points and
// matching noisy observations.
Problem make_problem(Eigen::Index m) {
  kval::SynthConfig config;
  config.n_test = static_cast<int>(m);
  const kval::SyntheticExperiment ex = kval::make_synthetic_experiment(config, 7);
  const kval::FittedGP model = kval::fit(config.truth_kernel, config.truth_mean, ex.train_set);
  Problem p{kval::predict(model, ex.test_set.inputs), ex.test_set.values};
  kval::add_observation_noise(p.prediction, ex.test_set.noise_variances);
  return p;
}

std::vector<double> uniform_sample(int n) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(static_cast<std::size_t>(n));
  for (auto& v : p) v = u(rng);
  return p;
}

void BM_Mahalanobis(benchmark::State& state) {
  const Problem p = make_problem(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kval::mahalanobis(p.prediction, p.observed));
}
BENCHMARK(BM_Mahalanobis)->Arg(80)->Arg(320);

void BM_NormalModeResiduals(benchmark::State& state) {
  const Problem p = make_problem(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kval::normal_mode_residuals(p.prediction, p.observed));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NormalModeResiduals)->RangeMultiplier(2)->Range(20, 320)->Complexity(benchmark::oNCubed);

void BM_BetaMle(benchmark::State& state) {
  const std::vector<double> p = uniform_sample(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kval::beta_mle(p));
}
BENCHMARK(BM_BetaMle)->Arg(80)->Arg(10000);

void BM_BetaPosteriorDefaultGrid(benchmark::State& state) {
  const std::vector<double> p = uniform_sample(80);
  for (auto _ : state) benchmark::DoNotOptimize(kval::beta_posterior(p));
}
BENCHMARK(BM_BetaPosteriorDefaultGrid)->Unit(benchmark::kMillisecond);

void BM_Validate(benchmark::State& state) {
  const Problem p = make_problem(80);
  for (auto _ : state) benchmark::DoNotOptimize(kval::validate(p.prediction, p.observed));
}
BENCHMARK(BM_Validate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include <random>

#include <benchmark/benchmark.h>

#include "kval/gp_regression.hpp"
#include "kval/synth.hpp"

namespace {

// Noisy observations of a Matern 3/2 draw at n sorted points of [0, 1].
kval::Dataset make_data(Eigen::Index n) {
  const kval::Points x = kval::uniform_grid(0.0, 1.0, n);
  kval::Dataset d;
  d.inputs = x;
  d.values = kval::sample_prior_function({kval::KernelFamily::Matern15, 1.0, 0.1}, {}, x, 1);
  d.noise_variances = Eigen::VectorXd::Constant(n, 0.0025);
  return d;
}

void BM_Fit(benchmark::State& state) {
  const kval::Dataset d = make_data(state.range(0));
  const kval::KernelSpec k{kval::KernelFamily::Matern25, 1.0, 0.1};
  for (auto _ : state) benchmark::DoNotOptimize(kval::fit(k, {}, d));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fit)->RangeMultiplier(2)->Range(16, 512)->Complexity(benchmark::oNCubed);

void BM_PredictFullCovariance(benchmark::State& state) {
  const kval::FittedGP model = kval::fit({kval::KernelFamily::Matern25, 1.0, 0.1}, {}, make_data(40));
  const kval::Points test = kval::uniform_grid(0.0, 1.0, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kval::predict(model, test));
}
BENCHMARK(BM_PredictFullCovariance)->RangeMultiplier(2)->Range(16, 512);

void BM_LogMarginalLikelihoodWithGradient(benchmark::State& state) {
  const kval::Dataset d = make_data(state.range(0));
  const kval::KernelSpec k{kval::KernelFamily::Matern15, 1.0, 0.1};
  for (auto _ : state) benchmark::DoNotOptimize(kval::log_marginal_likelihood_with_gradient(k, {}, d));
}
BENCHMARK(BM_LogMarginalLikelihoodWithGradient)->Arg(40)->Arg(200);

void BM_Train(benchmark::State& state) {
  const kval::Dataset d = make_data(state.range(0));
  kval::TrainOptions options;
  options.seed = 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kval::train(kval::KernelFamily::SquaredExponential, {}, d, options));
  }
}
BENCHMARK(BM_Train)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_SamplePrior512(benchmark::State& state) {
  const kval::PriorSampler sampler({kval::KernelFamily::Matern15, 1.0, 0.1}, {},
                                   kval::uniform_grid(0.0, 1.0, 512));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(++seed));
}
BENCHMARK(BM_SamplePrior512);

}  // namespace

BENCHMARK_MAIN();

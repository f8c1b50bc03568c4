#include "kval/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>
#include <thread>

#include "kval/errors.hpp"
#include "kval/formats.hpp"
#include "kval/plots.hpp"
#include "kval/random.hpp"

namespace kval {

namespace {

Settings config_settings(const ExperimentConfig& config) { return config_entries(config); }

Settings replicate_settings(const ExperimentConfig& config, std::uint64_t seed) {
  Settings s = config_settings(config);
  s.emplace_back("replicate_seed", std::to_string(seed));
  return s;
}

std::string replicate_dir_name(std::uint64_t seed) {
  std::ostringstream s;
  s << "replicate_" << std::setw(6) << std::setfill('0') << seed;
  return s.str();
}

}  // namespace

CandidateFit fit_candidate(const ExperimentConfig& config, const Dataset& train_set, std::uint64_t seed) {
  const MeanSpec mean{config.candidate_mean};
  CandidateFit out;
  switch (config.train_mode) {
    case TrainMode::TrainMle: {
      TrainOptions opts;
      opts.restarts = config.train_restarts;
      opts.seed = make_rng(seed, Stream::Training)();
      opts.train_noise = config.train_noise;
      const TrainResult r = train(config.candidate_kernel, mean, train_set, opts);
      out.kernel = r.kernel;
      out.noise_variance = r.noise_variance;
      out.log_likelihood = r.log_likelihood;
      return out;
    }
    case TrainMode::FixAtTruth:
      out.kernel = KernelSpec{config.candidate_kernel, config.truth_kernel.signal_variance,
                              config.truth_kernel.length_scale};
      break;
    case TrainMode::FixExplicit:
      out.kernel = KernelSpec{config.candidate_kernel, config.candidate_signal_variance,
                              config.candidate_length_scale};
      break;
  }
  out.log_likelihood = log_marginal_likelihood(out.kernel, mean, train_set);
  return out;
}

ReplicateOutcome run_replicate(const ExperimentConfig& config, std::uint64_t seed,
                               const PriorSampler& sampler) {
  ReplicateOutcome outcome;
  ReplicateResult& r = outcome.result;
  r.seed = seed;
  try {
    SynthConfig sc;
    sc.truth_kernel = config.truth_kernel;
    sc.truth_mean = MeanSpec{config.truth_mean};
    sc.domain_min = config.domain_min;
    sc.domain_max = config.domain_max;
    sc.grid_size = config.grid_size;
    sc.n_train = config.n_train;
    sc.n_test = config.n_test;
    sc.noise_sd = config.noise_sd;
    outcome.experiment = make_synthetic_experiment(sc, seed, &sampler);
    const SyntheticExperiment& ex = *outcome.experiment;

    const CandidateFit cand = fit_candidate(config, ex.train_set, seed);
    outcome.trained_noise_variance = cand.noise_variance;
    r.candidate = cand.kernel;
    r.train_log_likelihood = cand.log_likelihood;

    outcome.model = fit(cand.kernel, MeanSpec{config.candidate_mean},
                        with_added_noise(ex.train_set, cand.noise_variance));
    Prediction pred = predict(*outcome.model, ex.test_set.inputs);
    add_observation_noise(pred, ex.test_set.noise_variances.array() + cand.noise_variance);

    ValidationOptions vopts;
    vopts.grid = config.posterior;
    outcome.report = validate(pred, ex.test_set.values, vopts);
    const ValidationReport& rep = *outcome.report;
    r.chi2_m = rep.mahalanobis;
    r.dof = rep.dof;
    r.p_value = rep.p_value;
    r.a_hat = rep.beta_fit.a_hat;
    r.b_hat = rep.beta_fit.b_hat;
    r.uniform_coverage = rep.uniform_coverage;
    r.ok = true;
  } catch (const Error& e) {
    r.ok = false;
    r.error = e.what();
  }
  return outcome;
}

void persist_replicate(const ExperimentConfig& config, const ReplicateOutcome& outcome,
                       const std::filesystem::path& dir) {
  const Settings settings = replicate_settings(config, outcome.result.seed);
  if (outcome.experiment) {
    const SyntheticExperiment& ex = *outcome.experiment;
    Dataset truth;
    truth.inputs = ex.grid;
    truth.values = ex.truth_values;
    truth.noise_variances = Eigen::VectorXd::Zero(ex.truth_values.size());
    write_dataset_csv(dir / "truth.csv", truth, settings);
    write_dataset_csv(dir / "train.csv", ex.train_set, settings);
    write_dataset_csv(dir / "test.csv", ex.test_set, settings);
  }
  if (outcome.model) {
    ModelFile mf{outcome.model->kernel(), outcome.model->mean(), outcome.trained_noise_variance,
                 outcome.result.train_log_likelihood};
    write_model_file(dir / "model.txt", mf, settings);
  }
  if (outcome.report) {
    const ValidationReport& rep = *outcome.report;
    write_report(dir / "report.txt", rep, settings);
    emit_pk_histogram(rep, dir / "pk_histogram.csv", settings);
    emit_posterior_heatmap(rep.posterior, rep.beta_fit, dir / "posterior.csv",
                           dir / "posterior.svg", settings);
  }
  if (outcome.model && outcome.experiment) {
    const SyntheticExperiment& ex = *outcome.experiment;
    emit_fit_plot(*outcome.model, ex.grid, ex.truth_values, ex.train_set, ex.test_set,
                  dir / "fit.svg", {}, settings);
  }
  if (!outcome.result.ok) {
    write_text_file(dir / "error.txt", outcome.result.error + "\n");
  }
}

void write_summary_csv(const std::filesystem::path& path, const ExperimentConfig& config,
                       const std::vector<ReplicateResult>& results) {
  std::string out = render_config(config, "# ");
  out += "seed,status,chi2_m,dof,p_value,a_hat,b_hat,uniform_coverage,train_log_likelihood,"
         "candidate_signal_variance,candidate_length_scale,error\n";
  for (const ReplicateResult& r : results) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    if (r.ok) {
      out += std::to_string(r.seed) + ",ok," + format_double(r.chi2_m) + "," + std::to_string(r.dof) +
             "," + format_double(r.p_value) + "," + format_double(r.a_hat) + "," +
             format_double(r.b_hat) + "," + format_double(r.uniform_coverage) + "," +
             format_double(r.train_log_likelihood) + "," +
             format_double(r.candidate.signal_variance) + "," +
             format_double(r.candidate.length_scale) + ",\n";
    } else {
      out += std::to_string(r.seed) + ",failed,nan,0,nan,nan,nan,nan,nan,nan,nan," + err + "\n";
    }
  }
  write_text_file(path, out);
}

ExperimentSummary run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const auto started = std::chrono::system_clock::now();
  const PriorSampler sampler(config.truth_kernel, MeanSpec{config.truth_mean},
                             uniform_grid(config.domain_min, config.domain_max, config.grid_size));
  const std::filesystem::path out_dir(config.output_dir);

  ExperimentSummary summary;
  summary.results.resize(static_cast<std::size_t>(config.n_replicates));
  std::atomic<int> next{0};
  std::vector<std::string> io_errors(summary.results.size());
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < config.n_replicates; i = next.fetch_add(1)) {
      const std::uint64_t seed = replicate_seed(config, i);
      ReplicateOutcome outcome = run_replicate(config, seed, sampler);
      if (options.write_replicate_files) {
        try {
          persist_replicate(config, outcome, out_dir / replicate_dir_name(seed));
        } catch (const Error& e) {
          io_errors[static_cast<std::size_t>(i)] = e.what();
        }
      }
      summary.results[static_cast<std::size_t>(i)] = std::move(outcome.result);
    }
  };
  int threads = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, config.n_replicates);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const std::string& e : io_errors) {
    if (!e.empty()) throw IoError(e);
  }
  summary.failed = static_cast<int>(
      std::count_if(summary.results.begin(), summary.results.end(), [](const auto& r) { return !r.ok; }));

  if (options.write_summary) {
    write_text_file(out_dir / "config.txt", render_config(config));
    write_summary_csv(out_dir / "summary.csv", config, summary.results);
    const std::time_t t = std::chrono::system_clock::to_time_t(started);
    std::ostringstream meta;
    meta << "started_utc = " << std::put_time(std::gmtime(&t), "%Y-%m-%dT%H:%M:%SZ") << "\n"
         << "elapsed_seconds = "
         << std::chrono::duration<double>(std::chrono::system_clock::now() - started).count() << "\n"
         << "replicates = " << config.n_replicates << "\n"
         << "failed = " << summary.failed << "\n"
         << "threads = " << threads << "\n";
    write_text_file(out_dir / "metadata.txt", meta.str());
  }
  return summary;
}

}  // namespace kval

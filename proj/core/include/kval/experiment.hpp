#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kval/config.hpp"
#include "kval/gp_regression.hpp"
#include "kval/synth.hpp"
#include "kval/validation.hpp"

namespace kval {

/// One row of the replicate summary.
struct ReplicateResult {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double chi2_m = 0.0;
  int dof = 0;
  double p_value = 0.0;
  double a_hat = 0.0;
  double b_hat = 0.0;
  double uniform_coverage = 0.0;
  double train_log_likelihood = 0.0;
  KernelSpec candidate;
};

/// Everything produced by one replicate, for callers that persist or inspect
/// it.
struct ReplicateOutcome {
  ReplicateResult result;
  std::optional<SyntheticExperiment> experiment;
  std::optional<FittedGP> model;
  std::optional<ValidationReport> report;
  double trained_noise_variance = 0.0;
};

/// Candidate hyperparameters for a replicate according to the train mode.
struct CandidateFit {
  KernelSpec kernel;
  double noise_variance = 0.0;
  double log_likelihood = 0.0;
};

CandidateFit fit_candidate(const ExperimentConfig& config, const Dataset& train_set,
                           std::uint64_t seed);

/// Synthesize, fit, predict at the held-out inputs (including their
/// observation noise) and validate. Component errors are caught and reported
/// in `result.error`.
ReplicateOutcome run_replicate(const ExperimentConfig& config, std::uint64_t seed,
                               const PriorSampler& sampler);

/// Seed of replicate `index`.
inline std::uint64_t replicate_seed(const ExperimentConfig& config, int index) {
  return config.rng_seed + static_cast<std::uint64_t>(index);
}

struct RunOptions {
  /// Write per-replicate datasets, model, report, CSVs and SVGs.
  bool write_replicate_files = true;
  /// Write summary.csv, config.txt and metadata.txt into output_dir.
  bool write_summary = true;
};

struct ExperimentSummary {
  std::vector<ReplicateResult> results;
  int failed = 0;

  bool majority_failed() const { return 2 * failed > static_cast<int>(results.size()); }
};

/// Runs all replicates on a worker pool; results are ordered by replicate
/// index and independent of the thread count.
ExperimentSummary run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Writes the artifacts of one replicate into `dir`.
void persist_replicate(const ExperimentConfig& config, const ReplicateOutcome& outcome,
                       const std::filesystem::path& dir);

/// seed,status,chi2_m,dof,p_value,a_hat,b_hat,uniform_coverage,
/// train_log_likelihood,candidate_signal_variance,candidate_length_scale,error
void write_summary_csv(const std::filesystem::path& path, const ExperimentConfig& config,
                       const std::vector<ReplicateResult>& results);

}  // namespace kval

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kval/kernels.hpp"
#include "kval/validation.hpp"

namespace kval {

enum class TrainMode { TrainMle, FixAtTruth, FixExplicit };

std::string_view to_string(TrainMode mode);
TrainMode parse_train_mode(std::string_view name);

/// Everything needed to reproduce a synthetic misspecification study. The
/// defaults describe a rough (Matern 3/2) truth on [0, 1] observed with
/// noise sd 0.05 at 40 training and 80 held-out grid points.
struct ExperimentConfig {
  KernelSpec truth_kernel{KernelFamily::Matern15, 1.0, 0.1};
  double truth_mean = 0.0;
  double noise_sd = 0.05;
  int n_train = 40;
  int n_test = 80;
  double domain_min = 0.0;
  double domain_max = 1.0;
  int grid_size = 512;

  KernelFamily candidate_kernel = KernelFamily::SquaredExponential;
  double candidate_mean = 0.0;
  TrainMode train_mode = TrainMode::TrainMle;
  /// Used only with TrainMode::FixExplicit.
  double candidate_signal_variance = 1.0;
  double candidate_length_scale = 0.1;
  int train_restarts = 5;
  bool train_noise = false;

  std::uint64_t rng_seed = 1;
  int n_replicates = 1;
  PosteriorGridConfig posterior;
  std::string output_dir = "kval_out";
  /// Worker threads for replicates; 0 means hardware concurrency. Never
  /// affects results.
  int threads = 0;

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;
};

/// Ordered (key, value) pairs covering every field.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& config);

/// Sets one field from its textual form. Unknown keys and unparsable values
/// raise ConfigError. Dashes in `key` are read as underscores.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Parses "key = value" lines; '#' starts a comment.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

/// "key = value" lines, each prefixed with `prefix` (e.g. "# ").
std::string render_config(const ExperimentConfig& config, std::string_view prefix = "");

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

}  // namespace kval

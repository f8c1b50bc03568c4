#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kval/gp_regression.hpp"
#include "kval/kernels.hpp"
#include "kval/validation.hpp"

namespace kval {

/// Ordered key/value settings embedded as comment headers in output files.
using Settings = std::vector<std::pair<std::string, std::string>>;

/// Settings rendered as "<prefix>key = value" lines.
std::string render_settings(const Settings& settings, std::string_view prefix);

/// Dataset CSV: '#' comment lines, then a header "x,f,noise_sd" (1-D) or
/// "x0,...,x{D-1},f,noise_sd", then one row per observation. The noise column
/// holds standard deviations.
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data,
                       const Settings& settings = {});
Dataset read_dataset_csv(const std::filesystem::path& path);

/// Candidate model as "key = value" text: family, signal_variance,
/// length_scale, mean_constant and noise_variance (the trained homoscedastic
/// term, 0 when noise is known).
struct ModelFile {
  KernelSpec kernel;
  MeanSpec mean;
  double noise_variance = 0.0;
  double log_likelihood = 0.0;
};

void write_model_file(const std::filesystem::path& path, const ModelFile& model,
                      const Settings& settings = {});
ModelFile read_model_file(const std::filesystem::path& path);

/// ValidationReport as "key = value" text; vectors are comma separated.
std::string render_report(const ValidationReport& report);
void write_report(const std::filesystem::path& path, const ValidationReport& report,
                  const Settings& settings = {});
/// Parses the flat key/value structure of a report file.
std::vector<std::pair<std::string, std::string>> read_key_values(const std::filesystem::path& path);

/// bin_left,bin_right,density for 10 equal bins on [0, 1].
void emit_pk_histogram(const ValidationReport& report, const std::filesystem::path& path,
                       const Settings& settings = {});
void write_pk_histogram_csv(const PkHistogram& histogram, const std::filesystem::path& path,
                            const Settings& settings = {});

/// a,b,density rows, a-major (all b for the first a, then the next a), with
/// density = cell_mass / cell_area.
void write_posterior_csv(const BetaPosterior& posterior, const std::filesystem::path& path,
                         const Settings& settings = {});

/// Writes `content` atomically enough for our purposes; throws IoError.
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

/// Parses one CSV line of doubles.
std::vector<double> parse_csv_doubles(std::string_view line);

}  // namespace kval

// kval: synthetic kernel-misspecification experiments and GP predictive
// validation from the command line.
//
// Exit codes: 0 success, 1 usage or config error, 2 numerical failure
// (a failed single-shot command, or more than half of the replicates),
// 3 I/O error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kval/config.hpp"
#include "kval/errors.hpp"
#include "kval/experiment.hpp"
#include "kval/formats.hpp"
#include "kval/gp_regression.hpp"
#include "kval/plots.hpp"
#include "kval/random.hpp"
#include "kval/synth.hpp"
#include "kval/validation.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

// Turns "--key value" / "--key=value" leftovers into config overrides.
kval::ExperimentConfig resolve_config(const std::string& config_path,
                                      const std::vector<std::string>& extras) {
  kval::ExperimentConfig config;
  if (!config_path.empty()) config = kval::load_config(config_path, config);
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& tok = extras[i];
    if (tok.rfind("--", 0) != 0) throw kval::ConfigError("unexpected argument '" + tok + "'");
    const std::string body = tok.substr(2);
    if (const auto eq = body.find('='); eq != std::string::npos) {
      kval::apply_setting(config, body.substr(0, eq), body.substr(eq + 1));
      continue;
    }
    if (i + 1 >= extras.size()) throw kval::ConfigError("missing value for '" + tok + "'");
    kval::apply_setting(config, body, extras[++i]);
  }
  config.validate();
  return config;
}

int cmd_generate(const kval::ExperimentConfig& config) {
  const kval::PriorSampler sampler(
      config.truth_kernel, kval::MeanSpec{config.truth_mean},
      kval::uniform_grid(config.domain_min, config.domain_max, config.grid_size));
  kval::SynthConfig sc;
  sc.truth_kernel = config.truth_kernel;
  sc.truth_mean = kval::MeanSpec{config.truth_mean};
  sc.domain_min = config.domain_min;
  sc.domain_max = config.domain_max;
  sc.grid_size = config.grid_size;
  sc.n_train = config.n_train;
  sc.n_test = config.n_test;
  sc.noise_sd = config.noise_sd;
  const kval::SyntheticExperiment ex = kval::make_synthetic_experiment(sc, config.rng_seed, &sampler);

  const fs::path dir(config.output_dir);
  const kval::Settings settings = kval::config_entries(config);
  kval::Dataset truth;
  truth.inputs = ex.grid;
  truth.values = ex.truth_values;
  truth.noise_variances = Eigen::VectorXd::Zero(ex.truth_values.size());
  kval::write_dataset_csv(dir / "truth.csv", truth, settings);
  kval::write_dataset_csv(dir / "train.csv", ex.train_set, settings);
  kval::write_dataset_csv(dir / "test.csv", ex.test_set, settings);
  kval::write_text_file(dir / "config.txt", kval::render_config(config));
  std::cout << "wrote " << (dir / "truth.csv").string() << ", train.csv, test.csv\n";
  return kExitOk;
}

struct FitArgs {
  std::string data;
  std::string kernel = "rbf";
  std::string mode = "train_mle";
  double signal_variance = 1.0;
  double length_scale = 0.1;
  double mean = 0.0;
  int restarts = 5;
  std::uint64_t seed = 1;
  bool train_noise = false;
  std::string out = "model.txt";
};

int cmd_fit(const FitArgs& a) {
  const kval::Dataset data = kval::read_dataset_csv(a.data);
  const kval::KernelFamily family = kval::parse_kernel_family(a.kernel);
  const kval::MeanSpec mean{a.mean};
  kval::ModelFile model;
  model.mean = mean;
  if (a.mode == "train_mle") {
    kval::TrainOptions opts;
    opts.restarts = a.restarts;
    opts.seed = a.seed;
    opts.train_noise = a.train_noise;
    const kval::TrainResult r = kval::train(family, mean, data, opts);
    model.kernel = r.kernel;
    model.noise_variance = r.noise_variance;
    model.log_likelihood = r.log_likelihood;
    if (r.hit_bound) std::cerr << "warning: optimum lies on a bound of the search domain\n";
  } else if (a.mode == "fix_explicit" || a.mode == "fixed") {
    model.kernel = kval::KernelSpec{family, a.signal_variance, a.length_scale};
    model.log_likelihood = kval::log_marginal_likelihood(model.kernel, mean, data);
  } else {
    throw kval::ConfigError("fit: --mode must be train_mle or fix_explicit");
  }
  const kval::Settings settings = {
      {"data", a.data},       {"kernel", a.kernel},
      {"mode", a.mode},       {"restarts", std::to_string(a.restarts)},
      {"seed", std::to_string(a.seed)}, {"train_noise", a.train_noise ? "true" : "false"}};
  kval::write_model_file(a.out, model, settings);
  std::cout << "family = " << kval::to_string(model.kernel.family)
            << "\nsignal_variance = " << kval::format_double(model.kernel.signal_variance)
            << "\nlength_scale = " << kval::format_double(model.kernel.length_scale)
            << "\nlog_likelihood = " << kval::format_double(model.log_likelihood) << "\n";
  return kExitOk;
}

struct ValidateArgs {
  std::string model;
  std::string train;
  std::string test;
  std::string truth;
  std::string out_dir = "kval_validate";
  kval::PosteriorGridConfig grid;
};

int cmd_validate(const ValidateArgs& a) {
  const kval::ModelFile mf = kval::read_model_file(a.model);
  const kval::Dataset train = kval::read_dataset_csv(a.train);
  const kval::Dataset test = kval::read_dataset_csv(a.test);
  const kval::FittedGP model =
      kval::fit(mf.kernel, mf.mean, kval::with_added_noise(train, mf.noise_variance));
  kval::Prediction pred = kval::predict(model, test.inputs);
  kval::add_observation_noise(pred, test.noise_variances.array() + mf.noise_variance);
  kval::ValidationOptions opts;
  opts.grid = a.grid;
  const kval::ValidationReport report = kval::validate(pred, test.values, opts);

  const fs::path dir(a.out_dir);
  const kval::Settings settings = {{"model", a.model}, {"train", a.train}, {"test", a.test},
                                   {"truth", a.truth},
                                   {"posterior_a_min", kval::format_double(a.grid.a_min)},
                                   {"posterior_a_max", kval::format_double(a.grid.a_max)},
                                   {"posterior_b_min", kval::format_double(a.grid.b_min)},
                                   {"posterior_b_max", kval::format_double(a.grid.b_max)},
                                   {"posterior_a_cells", std::to_string(a.grid.a_cells)},
                                   {"posterior_b_cells", std::to_string(a.grid.b_cells)}};
  kval::write_report(dir / "report.txt", report, settings);
  kval::emit_pk_histogram(report, dir / "pk_histogram.csv", settings);
  kval::emit_posterior_heatmap(report.posterior, report.beta_fit, dir / "posterior.csv",
                               dir / "posterior.svg", settings);
  if (!a.truth.empty()) {
    const kval::Dataset truth = kval::read_dataset_csv(a.truth);
    try {
      kval::emit_fit_plot(model, truth.inputs, truth.values, train, test, dir / "fit.svg", {},
                          settings);
    } catch (const kval::UnsupportedPlotError& e) {
      std::cerr << "warning: " << e.what() << "\n";
    }
  }
  std::cout << "chi2_m = " << kval::format_double(report.mahalanobis) << " (dof " << report.dof
            << ")\np_value = " << kval::format_double(report.p_value)
            << "\nbeta_a_hat = " << kval::format_double(report.beta_fit.a_hat)
            << "\nbeta_b_hat = " << kval::format_double(report.beta_fit.b_hat)
            << "\nuniform_coverage = " << kval::format_double(report.uniform_coverage) << "\n";
  return kExitOk;
}

int cmd_run(const kval::ExperimentConfig& config, bool replicate_files) {
  kval::RunOptions opts;
  opts.write_replicate_files = replicate_files;
  const kval::ExperimentSummary summary = kval::run_experiment(config, opts);
  std::cout << "replicates: " << summary.results.size() << ", failed: " << summary.failed << "\n"
            << "summary: " << (fs::path(config.output_dir) / "summary.csv").string() << "\n";
  for (const auto& r : summary.results) {
    if (!r.ok) std::cerr << "replicate " << r.seed << " failed: " << r.error << "\n";
  }
  return summary.majority_failed() ? kExitNumerical : kExitOk;
}

void add_grid_options(CLI::App* app, kval::PosteriorGridConfig& grid) {
  app->add_option("--posterior-a-min", grid.a_min, "Posterior grid lower bound for a");
  app->add_option("--posterior-a-max", grid.a_max, "Posterior grid upper bound for a");
  app->add_option("--posterior-b-min", grid.b_min, "Posterior grid lower bound for b");
  app->add_option("--posterior-b-max", grid.b_max, "Posterior grid upper bound for b");
  app->add_option("--posterior-a-cells", grid.a_cells, "Posterior cells along a");
  app->add_option("--posterior-b-cells", grid.b_cells, "Posterior cells along b");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GP kernel validation: Mahalanobis and normal-mode calibration tests"};
  app.require_subcommand(1);

  std::string config_path;
  const auto add_config_command = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Flat key = value config file");
    sub->allow_extras();
    sub->footer("Any config key may be overridden with --key value.");
    return sub;
  };
  CLI::App* generate = add_config_command("generate", "Synthesize a truth function and datasets");
  CLI::App* run = add_config_command("run", "Full experiment with per-replicate artifacts");
  CLI::App* study = add_config_command("replicate-study", "Many seeds, summary CSV only");

  FitArgs fit_args;
  CLI::App* fit = app.add_subcommand("fit", "Fit a candidate kernel to a dataset file");
  fit->add_option("--data", fit_args.data, "Training dataset CSV")->required();
  fit->add_option("--kernel", fit_args.kernel, "rbf, matern15 or matern25");
  fit->add_option("--mode", fit_args.mode, "train_mle or fix_explicit");
  fit->add_option("--signal-variance", fit_args.signal_variance, "Fixed signal variance");
  fit->add_option("--length-scale", fit_args.length_scale, "Fixed length scale");
  fit->add_option("--mean", fit_args.mean, "Constant prior mean");
  fit->add_option("--restarts", fit_args.restarts, "Optimizer restarts")->check(CLI::PositiveNumber);
  fit->add_option("--seed", fit_args.seed, "Restart seed");
  fit->add_flag("--train-noise", fit_args.train_noise, "Also fit a homoscedastic noise variance");
  fit->add_option("--out", fit_args.out, "Model file to write");

  ValidateArgs val_args;
  CLI::App* val = app.add_subcommand("validate", "Validate a model against held-out data");
  val->add_option("--model", val_args.model, "Model file")->required();
  val->add_option("--train", val_args.train, "Training dataset CSV")->required();
  val->add_option("--test", val_args.test, "Held-out dataset CSV")->required();
  val->add_option("--truth", val_args.truth, "Optional truth CSV; enables fit.svg");
  val->add_option("--out-dir", val_args.out_dir, "Output directory");
  add_grid_options(val, val_args.grid);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*generate) return cmd_generate(resolve_config(config_path, generate->remaining()));
    if (*run) return cmd_run(resolve_config(config_path, run->remaining()), true);
    if (*study) return cmd_run(resolve_config(config_path, study->remaining()), false);
    if (*fit) return cmd_fit(fit_args);
    if (*val) {
      val_args.grid.validate();
      return cmd_validate(val_args);
    }
  } catch (const kval::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const kval::InvalidArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const kval::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const kval::Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}

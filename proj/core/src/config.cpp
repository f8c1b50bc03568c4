#include "kval/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kval/errors.hpp"

namespace kval {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + std::string(key) + "': '" + std::string(v) +
                      "' is not a number");
  }
  return out;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view v) {
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + std::string(key) + "': '" + std::string(v) +
                      "' is not an integer");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + std::string(key) + "': '" + std::string(v) +
                    "' is not a boolean");
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

std::string_view to_string(TrainMode mode) {
  switch (mode) {
    case TrainMode::TrainMle:
      return "train_mle";
    case TrainMode::FixAtTruth:
      return "fix_at_truth";
    case TrainMode::FixExplicit:
      return "fix_explicit";
  }
  return "unknown";
}

TrainMode parse_train_mode(std::string_view name) {
  if (name == "train_mle") return TrainMode::TrainMle;
  if (name == "fix_at_truth") return TrainMode::FixAtTruth;
  if (name == "fix_explicit") return TrainMode::FixExplicit;
  throw ConfigError("unknown train_mode '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid config: ") + what);
  };
  try {
    truth_kernel.validate();
  } catch (const InvalidSpecError& e) {
    throw ConfigError(std::string("invalid config: truth kernel: ") + e.what());
  }
  require(std::isfinite(truth_mean), "truth_mean must be finite");
  require(std::isfinite(noise_sd) && noise_sd > 0.0, "noise_sd must be > 0");
  require(n_train >= 1, "n_train must be >= 1");
  require(n_test >= 2, "n_test must be >= 2");
  require(std::isfinite(domain_min) && std::isfinite(domain_max) && domain_max > domain_min,
          "domain_min < domain_max required");
  require(grid_size >= 2, "grid_size must be >= 2");
  require(n_train + n_test <= grid_size, "n_train + n_test must not exceed grid_size");
  require(std::isfinite(candidate_mean), "candidate_mean must be finite");
  require(std::isfinite(candidate_signal_variance) && candidate_signal_variance > 0.0,
          "candidate_signal_variance must be > 0");
  require(std::isfinite(candidate_length_scale) && candidate_length_scale > 0.0,
          "candidate_length_scale must be > 0");
  require(train_restarts >= 1, "train_restarts must be >= 1");
  require(n_replicates >= 1, "n_replicates must be >= 1");
  require(threads >= 0, "threads must be >= 0");
  require(!output_dir.empty(), "output_dir must not be empty");
  try {
    posterior.validate();
  } catch (const InvalidArgumentError& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& c) {
  return {
      {"truth_kernel", std::string(to_string(c.truth_kernel.family))},
      {"truth_signal_variance", format_double(c.truth_kernel.signal_variance)},
      {"truth_length_scale", format_double(c.truth_kernel.length_scale)},
      {"truth_mean", format_double(c.truth_mean)},
      {"noise_sd", format_double(c.noise_sd)},
      {"n_train", std::to_string(c.n_train)},
      {"n_test", std::to_string(c.n_test)},
      {"domain_min", format_double(c.domain_min)},
      {"domain_max", format_double(c.domain_max)},
      {"grid_size", std::to_string(c.grid_size)},
      {"candidate_kernel", std::string(to_string(c.candidate_kernel))},
      {"candidate_mean", format_double(c.candidate_mean)},
      {"train_mode", std::string(to_string(c.train_mode))},
      {"candidate_signal_variance", format_double(c.candidate_signal_variance)},
      {"candidate_length_scale", format_double(c.candidate_length_scale)},
      {"train_restarts", std::to_string(c.train_restarts)},
      {"train_noise", c.train_noise ? "true" : "false"},
      {"rng_seed", std::to_string(c.rng_seed)},
      {"n_replicates", std::to_string(c.n_replicates)},
      {"posterior_a_min", format_double(c.posterior.a_min)},
      {"posterior_a_max", format_double(c.posterior.a_max)},
      {"posterior_b_min", format_double(c.posterior.b_min)},
      {"posterior_b_max", format_double(c.posterior.b_max)},
      {"posterior_a_cells", std::to_string(c.posterior.a_cells)},
      {"posterior_b_cells", std::to_string(c.posterior.b_cells)},
      {"output_dir", c.output_dir},
      {"threads", std::to_string(c.threads)},
  };
}

void apply_setting(ExperimentConfig& c, std::string_view raw_key, std::string_view raw_value) {
  std::string key(trim(raw_key));
  for (char& ch : key) {
    if (ch == '-') ch = '_';
  }
  const std::string_view v = trim(raw_value);
  try {
    if (key == "truth_kernel") c.truth_kernel.family = parse_kernel_family(v);
    else if (key == "truth_signal_variance") c.truth_kernel.signal_variance = parse_double(key, v);
    else if (key == "truth_length_scale") c.truth_kernel.length_scale = parse_double(key, v);
    else if (key == "truth_mean") c.truth_mean = parse_double(key, v);
    else if (key == "noise_sd") c.noise_sd = parse_double(key, v);
    else if (key == "n_train") c.n_train = parse_int<int>(key, v);
    else if (key == "n_test") c.n_test = parse_int<int>(key, v);
    else if (key == "domain_min") c.domain_min = parse_double(key, v);
    else if (key == "domain_max") c.domain_max = parse_double(key, v);
    else if (key == "grid_size") c.grid_size = parse_int<int>(key, v);
    else if (key == "candidate_kernel") c.candidate_kernel = parse_kernel_family(v);
    else if (key == "candidate_mean") c.candidate_mean = parse_double(key, v);
    else if (key == "train_mode") c.train_mode = parse_train_mode(v);
    else if (key == "candidate_signal_variance") c.candidate_signal_variance = parse_double(key, v);
    else if (key == "candidate_length_scale") c.candidate_length_scale = parse_double(key, v);
    else if (key == "train_restarts") c.train_restarts = parse_int<int>(key, v);
    else if (key == "train_noise") c.train_noise = parse_bool(key, v);
    else if (key == "rng_seed") c.rng_seed = parse_int<std::uint64_t>(key, v);
    else if (key == "n_replicates") c.n_replicates = parse_int<int>(key, v);
    else if (key == "posterior_a_min") c.posterior.a_min = parse_double(key, v);
    else if (key == "posterior_a_max") c.posterior.a_max = parse_double(key, v);
    else if (key == "posterior_b_min") c.posterior.b_min = parse_double(key, v);
    else if (key == "posterior_b_max") c.posterior.b_max = parse_double(key, v);
    else if (key == "posterior_a_cells") c.posterior.a_cells = parse_int<int>(key, v);
    else if (key == "posterior_b_cells") c.posterior.b_cells = parse_int<int>(key, v);
    else if (key == "output_dir") c.output_dir = std::string(v);
    else if (key == "threads") c.threads = parse_int<int>(key, v);
    else throw ConfigError("unknown config key '" + key + "'");
  } catch (const InvalidArgumentError& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv(line);
    if (const auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
    sv = trim(sv);
    if (sv.empty()) continue;
    const auto eq = sv.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    apply_setting(base, sv.substr(0, eq), sv.substr(eq + 1));
  }
  return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

std::string render_config(const ExperimentConfig& config, std::string_view prefix) {
  std::string out;
  for (const auto& [k, v] : config_entries(config)) {
    out.append(prefix).append(k).append(" = ").append(v).append("\n");
  }
  return out;
}

}  // namespace kval

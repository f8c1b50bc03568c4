#include "kval/formats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kval/config.hpp"
#include "kval/errors.hpp"

namespace kval {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string join(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(v(i));
  }
  return out;
}

double to_double(std::string_view s, std::string_view what) {
  s = trim(s);
  double v = 0.0;
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidArgumentError(std::string(what) + ": cannot parse '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string render_settings(const Settings& settings, std::string_view prefix) {
  std::string out;
  for (const auto& [k, v] : settings) out.append(prefix).append(k).append(" = ").append(v).append("\n");
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write to " + path.string() + " failed");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<double> parse_csv_doubles(std::string_view line) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= line.size()) {
    const auto comma = line.find(',', start);
    const auto end = comma == std::string_view::npos ? line.size() : comma;
    out.push_back(to_double(line.substr(start, end - start), "csv"));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data,
                       const Settings& settings) {
  data.validate();
  std::string out = render_settings(settings, "# ");
  if (data.dimension() == 1) {
    out += "x,";
  } else {
    for (Eigen::Index d = 0; d < data.dimension(); ++d) out += "x" + std::to_string(d) + ",";
  }
  out += "f,noise_sd\n";
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    for (Eigen::Index d = 0; d < data.dimension(); ++d) out += format_double(data.inputs(i, d)) + ",";
    out += format_double(data.values(i)) + "," + format_double(std::sqrt(data.noise_variances(i))) +
           "\n";
  }
  write_text_file(path, out);
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  std::size_t columns = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    const std::string_view sv = trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    if (columns == 0) {
      columns = static_cast<std::size_t>(std::count(sv.begin(), sv.end(), ',')) + 1;
      if (columns < 3 || sv.substr(sv.size() - 10) != "f,noise_sd") {
        throw InvalidArgumentError(path.string() + ": header must end with 'f,noise_sd'");
      }
      continue;
    }
    std::vector<double> r = parse_csv_doubles(sv);
    if (r.size() != columns) {
      throw InvalidArgumentError(path.string() + ": row has " + std::to_string(r.size()) +
                                 " columns, header " + std::to_string(columns));
    }
    rows.push_back(std::move(r));
  }
  if (columns == 0) throw InvalidArgumentError(path.string() + ": missing header");
  const auto dim = static_cast<Eigen::Index>(columns - 2);
  Dataset data;
  data.inputs.resize(static_cast<Eigen::Index>(rows.size()), dim);
  data.values.resize(static_cast<Eigen::Index>(rows.size()));
  data.noise_variances.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (Eigen::Index d = 0; d < dim; ++d) data.inputs(ii, d) = rows[i][static_cast<std::size_t>(d)];
    data.values(ii) = rows[i][columns - 2];
    data.noise_variances(ii) = rows[i][columns - 1] * rows[i][columns - 1];
  }
  data.validate();
  return data;
}

void write_model_file(const std::filesystem::path& path, const ModelFile& model,
                      const Settings& settings) {
  model.kernel.validate();
  std::string out = render_settings(settings, "# ");
  out += "family = " + std::string(to_string(model.kernel.family)) + "\n";
  out += "signal_variance = " + format_double(model.kernel.signal_variance) + "\n";
  out += "length_scale = " + format_double(model.kernel.length_scale) + "\n";
  out += "mean_constant = " + format_double(model.mean.constant) + "\n";
  out += "noise_variance = " + format_double(model.noise_variance) + "\n";
  out += "log_likelihood = " + format_double(model.log_likelihood) + "\n";
  write_text_file(path, out);
}

std::vector<std::pair<std::string, std::string>> read_key_values(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view sv = trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    const auto eq = sv.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgumentError(path.string() + ": expected 'key = value', got '" +
                                 std::string(sv) + "'");
    }
    out.emplace_back(std::string(trim(sv.substr(0, eq))), std::string(trim(sv.substr(eq + 1))));
  }
  return out;
}

ModelFile read_model_file(const std::filesystem::path& path) {
  ModelFile model;
  bool has_family = false, has_s2 = false, has_ell = false;
  for (const auto& [k, v] : read_key_values(path)) {
    if (k == "family") {
      model.kernel.family = parse_kernel_family(v);
      has_family = true;
    } else if (k == "signal_variance") {
      model.kernel.signal_variance = to_double(v, k);
      has_s2 = true;
    } else if (k == "length_scale") {
      model.kernel.length_scale = to_double(v, k);
      has_ell = true;
    } else if (k == "mean_constant") {
      model.mean.constant = to_double(v, k);
    } else if (k == "noise_variance") {
      model.noise_variance = to_double(v, k);
    } else if (k == "log_likelihood") {
      model.log_likelihood = to_double(v, k);
    } else {
      throw InvalidArgumentError(path.string() + ": unknown model key '" + k + "'");
    }
  }
  if (!(has_family && has_s2 && has_ell)) {
    throw InvalidArgumentError(path.string() + ": model needs family, signal_variance, length_scale");
  }
  model.kernel.validate();
  return model;
}

std::string render_report(const ValidationReport& r) {
  std::ostringstream out;
  const auto& g = r.posterior.grid;
  out << "mahalanobis = " << format_double(r.mahalanobis) << "\n"
      << "dof = " << r.dof << "\n"
      << "p_value = " << format_double(r.p_value) << "\n"
      << "modes_dropped = " << (r.modes_dropped ? "true" : "false") << "\n"
      << "dropped_mode_count = " << r.residuals.dropped_modes << "\n"
      << "eigenvalues = " << join(r.residuals.eigenvalues) << "\n"
      << "rotated_residuals = " << join(r.residuals.rotated_residuals) << "\n"
      << "standardized = " << join(r.residuals.standardized) << "\n"
      << "survival_probs = " << join(r.residuals.survival_probs) << "\n"
      << "beta_a_hat = " << format_double(r.beta_fit.a_hat) << "\n"
      << "beta_b_hat = " << format_double(r.beta_fit.b_hat) << "\n"
      << "beta_max_log_likelihood = " << format_double(r.beta_fit.max_log_likelihood) << "\n"
      << "beta_converged = " << (r.beta_fit.converged ? "true" : "false") << "\n"
      << "beta_degenerate = " << (r.beta_fit.degenerate ? "true" : "false") << "\n"
      << "posterior_a_min = " << format_double(g.a_min) << "\n"
      << "posterior_a_max = " << format_double(g.a_max) << "\n"
      << "posterior_b_min = " << format_double(g.b_min) << "\n"
      << "posterior_b_max = " << format_double(g.b_max) << "\n"
      << "posterior_a_cells = " << g.a_cells << "\n"
      << "posterior_b_cells = " << g.b_cells << "\n"
      << "grid_widenings = " << r.grid_widenings << "\n"
      << "uniform_coverage = " << format_double(r.uniform_coverage) << "\n";
  return out.str();
}

void write_report(const std::filesystem::path& path, const ValidationReport& report,
                  const Settings& settings) {
  write_text_file(path, render_settings(settings, "# ") + render_report(report));
}

void write_pk_histogram_csv(const PkHistogram& h, const std::filesystem::path& path,
                            const Settings& settings) {
  std::string out = render_settings(settings, "# ");
  out += "bin_left,bin_right,density\n";
  for (Eigen::Index k = 0; k < h.density.size(); ++k) {
    out += format_double(h.bin_left(k)) + "," + format_double(h.bin_right(k)) + "," +
           format_double(h.density(k)) + "\n";
  }
  write_text_file(path, out);
}

void emit_pk_histogram(const ValidationReport& report, const std::filesystem::path& path,
                       const Settings& settings) {
  const Eigen::VectorXd& p = report.residuals.survival_probs;
  write_pk_histogram_csv(pk_histogram({p.data(), static_cast<std::size_t>(p.size())}), path,
                         settings);
}

void write_posterior_csv(const BetaPosterior& posterior, const std::filesystem::path& path,
                         const Settings& settings) {
  std::string out = render_settings(settings, "# ");
  out += "a,b,density\n";
  const double area = posterior.cell_area();
  for (Eigen::Index i = 0; i < posterior.a_grid.size(); ++i) {
    for (Eigen::Index j = 0; j < posterior.b_grid.size(); ++j) {
      out += format_double(posterior.a_grid(i)) + "," + format_double(posterior.b_grid(j)) + "," +
             format_double(posterior.cell_mass(i, j) / area) + "\n";
    }
  }
  write_text_file(path, out);
}

}  // namespace kval

#include "effham/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "effham/hamiltonian.hpp"

namespace effham {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not a number: '" + value +
                      "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError("config key '" + key + "': not an integer: '" + value +
                      "'");
  return i;
}

std::vector<std::string> split_commas(const std::string& value) {
  std::vector<std::string> parts;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(trim(item));
  return parts;
}

std::vector<double> parse_double_list(const std::string& key,
                                      const std::string& value) {
  std::vector<double> out;
  for (const std::string& part : split_commas(value))
    out.push_back(parse_double(key, part));
  return out;
}

std::vector<int> parse_int_list(const std::string& key,
                                const std::string& value) {
  std::vector<int> out;
  for (const std::string& part : split_commas(value))
    out.push_back(parse_int(key, part));
  return out;
}

void apply_key(ExperimentConfig& c, const std::string& key,
               const std::string& value) {
  if (key == "preset" || key == "hamiltonian") c.preset = value;
  else if (key == "n" || key == "n_per_dim") c.n = parse_int(key, value);
  else if (key == "P") c.P = parse_double_list(key, value);
  else if (key == "k") c.k = parse_double(key, value);
  else if (key == "method") c.method = value;
  else if (key == "tau") c.tau = parse_double(key, value);
  else if (key == "kappa") c.kappa = parse_double(key, value);
  else if (key == "T") c.T = parse_double(key, value);
  else if (key == "rel_tol") c.rel_tol = parse_double(key, value);
  else if (key == "abs_tol") c.abs_tol = parse_double(key, value);
  else if (key == "samples") c.samples = parse_int(key, value);
  else if (key == "newton_tol") c.newton_tol = parse_double(key, value);
  else if (key == "newton_max_iters")
    c.newton_max_iters = parse_int(key, value);
  else if (key == "epsilon") c.epsilon = parse_double(key, value);
  else if (key == "hbar_target") c.hbar_target = parse_double(key, value);
  else if (key == "bench_T") c.bench_T = parse_double(key, value);
  else if (key == "sweep_from") c.sweep_from = parse_double(key, value);
  else if (key == "sweep_to") c.sweep_to = parse_double(key, value);
  else if (key == "sweep_step") c.sweep_step = parse_double(key, value);
  else if (key == "k_list") c.k_list = parse_double_list(key, value);
  else if (key == "n_list") c.n_list = parse_int_list(key, value);
  else if (key == "out") c.out = value;
  else if (key == "experiment")
    throw ConfigError("'experiment' is set by the CLI verb, not the config");
  else
    throw ConfigError("unknown config key '" + key + "'");
}

} // namespace

ExperimentConfig default_config(const std::string& experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  if (experiment == "sweep") {
    c.n = 60;
  } else if (experiment == "kconv") {
    c.n = 60;
    c.P = {1.2732395447351628}; // 4/pi, the flat-part boundary
    c.k_list = {10.0, 100.0, 1000.0, 10000.0};
  } else if (experiment == "bench") {
    c.k = 100.0;
    c.method = "both";
    c.n_list = {15, 30, 60, 120};
  } else if (experiment == "stability") {
    c.n = 20;
    c.k = 1e5;
    c.T = 50.0;
    c.method = "both";
  } else if (experiment == "monotonicity") {
    c.preset = "strong_mix";
    c.n = 20;
    c.k = 100.0;
    c.T = 6.0;
    c.samples = 301;
  }
  return c;
}

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& experiment) {
  ExperimentConfig c = default_config(experiment);
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    apply_key(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

ExperimentConfig parse_config_file(const std::string& path,
                                   const std::string& experiment) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), experiment);
}

void finalize_config(ExperimentConfig& config) {
  Preset preset;
  try {
    preset = preset_from_name(config.preset);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  const int d = preset_dimension(preset);
  if (config.P.empty()) config.P.assign(d, 0.5);
  if (static_cast<int>(config.P.size()) != d)
    throw ConfigError("P has " + std::to_string(config.P.size()) +
                      " components but preset '" + config.preset + "' is " +
                      std::to_string(d) + "-dimensional");
  if (config.n < 2) throw ConfigError("n must be at least 2");
  if (!(config.k > 0.0)) throw ConfigError("k must be positive");
  if (config.method != "hrf" && config.method != "newton" &&
      config.method != "both")
    throw ConfigError("method must be hrf, newton, or both (got '" +
                      config.method + "')");
  if (!(config.tau >= 0.0) || !(config.kappa >= 0.0) ||
      config.tau + config.kappa <= 0.0)
    throw ConfigError("tau and kappa must be non-negative with tau+kappa > 0");
  if (!(config.T > 0.0)) throw ConfigError("T must be positive");
  if (config.samples < 2) throw ConfigError("samples must be at least 2");
  if (!(config.newton_tol > 0.0))
    throw ConfigError("newton_tol must be positive");
  if (!(config.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  for (size_t i = 1; i < config.k_list.size(); ++i)
    if (!(config.k_list[i] > config.k_list[i - 1]))
      throw ConfigError("k_list must be strictly ascending");
  for (double kv : config.k_list)
    if (!(kv > 0.0)) throw ConfigError("k_list entries must be positive");
  for (int nv : config.n_list)
    if (nv < 2) throw ConfigError("n_list entries must be at least 2");
  if (config.experiment == "sweep" && config.sweep_step <= 0.0)
    throw ConfigError("sweep_step must be positive");
  if (config.experiment == "sweep" && config.sweep_to < config.sweep_from)
    throw ConfigError("sweep_to must be >= sweep_from");
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_cell(double v) { return format_full(v); }
std::string csv_cell(const std::string& s) { return s; }

void write_csv(const std::string& path, const CsvRow& header,
               const std::vector<CsvRow>& rows) {
  std::string out;
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const CsvRow& r : rows) {
    if (r.size() != header.size())
      throw std::logic_error("csv row width mismatch for " + path);
    for (size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += r[i];
    }
    out += '\n';
  }
  write_text_file(path, out);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace effham

#ifndef EFFHAM_IO_HPP
#define EFFHAM_IO_HPP

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace effham {

// Raised for malformed configs, unknown keys, and inconsistent experiment
// settings; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Aggregated run parameters for every experiment driver.  Fields not used
// by a given experiment are ignored by it.
struct ExperimentConfig {
  std::string experiment; // solve|sweep|kconv|bench|stability|monotonicity
  std::string preset = "minus_sin";
  int n = 120;                  // nodes per axis
  std::vector<double> P;        // momentum; sized to the preset's dimension
  double k = 1e4;               // entropy penalization
  std::string method = "hrf";   // hrf|newton|both
  double tau = 1.0;
  double kappa = 1.0;
  double T = 40.0;              // flow horizon
  double rel_tol = 1e-10;       // integrator relative tolerance
  double abs_tol = 1e-12;       // integrator absolute tolerance
  int samples = 201;            // trajectory sample count
  double newton_tol = 1e-9;
  int newton_max_iters = 500;
  double epsilon = 1e-3;        // benchmark agreement threshold
  double hbar_target = std::numeric_limits<double>::quiet_NaN();
  double bench_T = 50.0;        // benchmark flow horizon
  double sweep_from = -2.0;
  double sweep_to = 2.0;
  double sweep_step = 0.1;
  std::vector<double> k_list;   // ascending, for kconv
  std::vector<int> n_list;      // for bench
  std::string out = ".";        // output directory prefix
};

// Baseline settings per experiment (the full-scale run parameters);
// config files and CLI flags override them.
ExperimentConfig default_config(const std::string& experiment);

// Parses flat `key = value` text over default_config(experiment): one
// pair per line, '#' comments, blank lines skipped, vectors
// comma-separated.  Unknown keys are errors.
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& experiment);
ExperimentConfig parse_config_file(const std::string& path,
                                   const std::string& experiment);

// Validates cross-field consistency (preset known, dimensioned P, positive
// k, ascending k_list, ...) and fills defaulted P.  Throws ConfigError.
void finalize_config(ExperimentConfig& config);

// 17-significant-digit formatting; round-trips doubles exactly.
std::string format_full(double v);

using CsvRow = std::vector<std::string>;

std::string csv_cell(double v);
std::string csv_cell(const std::string& s);

// Writes header + rows; every row must match the header width.
void write_csv(const std::string& path, const CsvRow& header,
               const std::vector<CsvRow>& rows);

void write_text_file(const std::string& path, const std::string& content);

} // namespace effham

#endif

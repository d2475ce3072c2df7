#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "effham/experiments.hpp"
#include "effham/io.hpp"

namespace {

// CLI overrides applied on top of the config file (or the defaults)
struct Overrides {
  std::string config_path;
  std::string out;
  std::vector<double> P;
  double k = 0.0;
  int n = 0;
  std::string method;
  double tau = 0.0;
  double kappa = 0.0;
  double T = 0.0;
  std::string preset;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config_path,
                  "key = value config file; CLI flags override it");
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--preset", o.preset,
                  "potential preset (minus_sin, two_cos, sin_sin, strong_mix)");
  sub->add_option("--P", o.P, "momentum components")->delimiter(',');
  sub->add_option("--k", o.k, "entropy penalization strength");
  sub->add_option("--n", o.n, "grid nodes per axis");
  sub->add_option("--method", o.method, "hrf, newton, or both");
  sub->add_option("--tau", o.tau, "Newton regularization weight");
  sub->add_option("--kappa", o.kappa, "Newton Jacobian weight");
  sub->add_option("--T", o.T, "flow horizon");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Effective Hamiltonian experiments on the torus"};
  app.require_subcommand(1);

  const std::vector<std::string> experiments = {
      "solve", "sweep", "kconv", "bench", "stability", "monotonicity"};
  const std::vector<std::string> blurbs = {
      "one stationary solve and/or relaxation flow",
      "effective Hamiltonian curve over a momentum range",
      "penalization-parameter convergence study",
      "flow vs Newton timing comparison",
      "large-penalization stress run",
      "monotonicity and contraction diagnostics for a state pair"};
  Overrides o;
  std::vector<CLI::App*> subs;
  for (size_t i = 0; i < experiments.size(); ++i) {
    CLI::App* sub = app.add_subcommand(experiments[i], blurbs[i]);
    add_common(sub, o);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string experiment;
  CLI::App* active = nullptr;
  for (size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed()) {
      experiment = experiments[i];
      active = subs[i];
    }

  try {
    effham::ExperimentConfig config =
        active->count("--config")
            ? effham::parse_config_file(o.config_path, experiment)
            : effham::default_config(experiment);
    if (active->count("--out")) config.out = o.out;
    if (active->count("--preset")) config.preset = o.preset;
    if (active->count("--P")) config.P = o.P;
    if (active->count("--k")) config.k = o.k;
    if (active->count("--n")) config.n = o.n;
    if (active->count("--method")) config.method = o.method;
    if (active->count("--tau")) config.tau = o.tau;
    if (active->count("--kappa")) config.kappa = o.kappa;
    if (active->count("--T")) config.T = o.T;
    effham::finalize_config(config);

    if (experiment == "solve") return effham::run_solve(config);
    if (experiment == "sweep") return effham::run_sweep(config);
    if (experiment == "kconv") return effham::run_kconv(config);
    if (experiment == "bench") return effham::run_bench(config);
    if (experiment == "stability") return effham::run_stability(config);
    return effham::run_monotonicity(config);
  } catch (const effham::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

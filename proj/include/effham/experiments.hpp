#ifndef EFFHAM_EXPERIMENTS_HPP
#define EFFHAM_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "effham/grid.hpp"
#include "effham/hamiltonian.hpp"
#include "effham/hrf.hpp"
#include "effham/io.hpp"
#include "effham/newton.hpp"
#include "effham/operators.hpp"

namespace effham {

struct RunSetup {
  TorusGrid grid;
  HamiltonianSpec spec;
  PenalizedParams params;
};

RunSetup make_setup(const ExperimentConfig& config);

// Regularized Newton loop with the benchmark stopping rule layered on
// top: stops on |H_estimate - target| <= epsilon when target is finite,
// else on the residual tolerance.  Positivity and singularity failures
// end the loop with ok=false and the failure message in status; the last
// accepted iterate is kept.
struct NewtonRun {
  DiscreteState state;
  std::vector<double> residuals;
  std::vector<double> hbars;
  std::vector<double> masses;
  std::vector<double> min_densities;
  int iterations = 0;
  double hbar = 0.0;
  std::string status;
  bool ok = false;
};

NewtonRun newton_with_stop(const DiscreteState& initial,
                           const HamiltonianSpec& spec, const TorusGrid& grid,
                           const PenalizedParams& params,
                           const NewtonConfig& config, double hbar_target,
                           double epsilon);

// Stationary state by whatever works: the plain regularized Newton
// iteration first, then the reduced solver on its best iterate when the
// density leaves the positive orthant (concentrated regimes).
struct RootResult {
  DiscreteState state;
  double hbar = 0.0;
  double residual = 0.0;
  std::string method;
};

RootResult find_root(const DiscreteState& start, const HamiltonianSpec& spec,
                     const TorusGrid& grid, const PenalizedParams& params,
                     const NewtonConfig& config);

// Trapped-branch corrector for the 1D pendulum family on the flat part:
// the level C in [-1,1] with |P| = integral of sqrt(2 max{C + sin 2pi s,
// 0}), and U accumulated from u_x = sign(P) sqrt(2 max{C + sin 2pi s, 0})
// - P by per-cell quadrature, mean zero.  Requires |P| <= 4/pi.
Eigen::VectorXd trapped_corrector_U(const TorusGrid& grid, double P);

// Experiment drivers.  Each writes its output files under config.out and
// returns 0 on success or 1 on a solver failure (partial outputs and a
// machine-readable error field are still written).
int run_solve(const ExperimentConfig& config);
int run_sweep(const ExperimentConfig& config);
int run_kconv(const ExperimentConfig& config);
int run_bench(const ExperimentConfig& config);
int run_stability(const ExperimentConfig& config);
int run_monotonicity(const ExperimentConfig& config);

} // namespace effham

#endif

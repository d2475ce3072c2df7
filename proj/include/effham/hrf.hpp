#ifndef EFFHAM_HRF_HPP
#define EFFHAM_HRF_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "effham/grid.hpp"
#include "effham/hamiltonian.hpp"
#include "effham/operators.hpp"

namespace effham {

struct FlowConfig {
  double T = 40.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  std::vector<double> sample_times; // strictly increasing, within [0, T]
  long long max_steps = 400'000'000;
  double initial_step = 1e-3;
  // optional early exit, evaluated after accepted steps; the state at the
  // stop is appended as the trajectory's final sample
  std::function<bool(double t, const LogState&)> stop;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DiscreteState> states;
  std::vector<double> hbar_series;
  std::vector<double> mass_series;        // mean(M) per sample
  std::vector<double> min_density_series; // min(M) per sample
  std::vector<double> lyapunov_series;    // filled by attach_lyapunov
  long long n_steps = 0;
  long long n_rhs_evals = 0;
  bool stopped_early = false;
  double stop_time = 0.0;
};

// Integrates (dW/dt, dU/dt) = F_bar_log from t=0 to T with an embedded
// Dormand-Prince 5(4) pair and PI step control.  Positivity of M = e^W is
// structural; mean(e^W) and mean(U) are conserved up to integrator error.
Trajectory integrate_hrf(const DiscreteState& initial,
                         const HamiltonianSpec& spec, const TorusGrid& grid,
                         const PenalizedParams& params,
                         const FlowConfig& config);

// m0 = 1 + 0.9 cos(2 pi x1), u0 = 0.2 cos(2 pi x1), renormalized to
// mean(M) = 1 and mean(U) = 0.
DiscreteState default_initial(const TorusGrid& grid);

} // namespace effham

#endif

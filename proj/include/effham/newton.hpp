#ifndef EFFHAM_NEWTON_HPP
#define EFFHAM_NEWTON_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "effham/grid.hpp"
#include "effham/hamiltonian.hpp"
#include "effham/operators.hpp"

namespace effham {

struct NewtonConfig {
  double tau = 1.0;   // regularization weight, >= 0
  double kappa = 1.0; // Newton weight, >= 0 (tau + kappa > 0)
  double residual_tol = 1e-9;
  int max_iters = 500;
};

// An iterate stepped outside the positive orthant; the iteration does not
// clamp, it reports the offending density index.
struct PositivityError : std::runtime_error {
  int index;
  explicit PositivityError(int i)
      : std::runtime_error("newton_step: density became non-positive at index " +
                           std::to_string(i)),
        index(i) {}
};

struct SingularMatrixError : std::runtime_error {
  double condition_estimate;
  explicit SingularMatrixError(double cond)
      : std::runtime_error(
            "lu_solve: matrix numerically singular (condition estimate " +
            std::to_string(cond) + "); consider raising tau"),
        condition_estimate(cond) {}
};

struct SolveResult {
  DiscreteState state;
  std::vector<double> residual_history; // ||F_bar||_inf per iterate
  std::vector<double> mass_history;     // mean(M) per iterate (monitored)
  std::vector<double> min_density_history;
  int iterations = 0;
  bool converged = false;
};

// Dense LU with partial pivoting; throws SingularMatrixError on an exactly
// singular pivot.
Eigen::VectorXd lu_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

// One step of the regularized iteration:
//   state - (tau I + kappa grad F_bar)^{-1} F_bar(state).
// kappa=0, tau=1 reduces to an explicit Euler step of the flow; tau=0,
// kappa=1 is Newton's method.
DiscreteState newton_step(const DiscreteState& state,
                          const HamiltonianSpec& spec, const TorusGrid& grid,
                          const PenalizedParams& params,
                          const NewtonConfig& config);

// Iterates newton_step until ||F_bar||_inf <= residual_tol or max_iters,
// recording residual, mass, and min-density histories.  Positivity is
// monitored, not enforced; a violating step raises PositivityError.
SolveResult newton_solve(const DiscreteState& initial,
                         const HamiltonianSpec& spec, const TorusGrid& grid,
                         const PenalizedParams& params,
                         const NewtonConfig& config);

struct ReducedRootResult {
  DiscreteState state; // M = exp(W) with W = k(G - hbar), mean(M) = 1
  Eigen::VectorXd W;   // log density, floored at -700 for representability
  double hbar = 0.0;
  double residual = 0.0; // ||F_bar||_inf at the returned state
  int iterations = 0;
};

// Stationary-state solver for strongly concentrated regimes where the
// plain iteration leaves the positive orthant.  Given U the density block
// is solved exactly in closed form, m = e^{k(G - hbar)} with hbar fixed by
// mean(m) = 1 (a log-sum-exp, so exponents stay bounded by ln N), and a
// damped Newton iteration runs on the remaining value-function equation
// L_U^* m(U) = 0 restricted to nodes near the density support.  Returns
// the best state found; check `residual` for the achieved quality.
ReducedRootResult reduced_newton_solve(const Eigen::VectorXd& U0,
                                       const HamiltonianSpec& spec,
                                       const TorusGrid& grid,
                                       const PenalizedParams& params,
                                       double tol = 1e-9,
                                       int max_iters = 60);

} // namespace effham

#endif

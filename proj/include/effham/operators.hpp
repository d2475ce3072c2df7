#ifndef EFFHAM_OPERATORS_HPP
#define EFFHAM_OPERATORS_HPP

#include <Eigen/Dense>

#include "effham/grid.hpp"
#include "effham/hamiltonian.hpp"

namespace effham {

struct PenalizedParams {
  double k; // entropy penalization strength, > 0
};

// Log-density coordinates: W = ln M componentwise.
struct LogState {
  Eigen::VectorXd W;
  Eigen::VectorXd U;
};

// H-tilde^k = sum_i (m_i G_i - (1/k) m_i ln m_i) / sum_i m_i.
// The un-normalized weighted form is kept so the estimate stays
// well-defined off the mean(M)=1 manifold during iteration.
double effective_H_estimate(const HamiltonianSpec& spec, const TorusGrid& grid,
                            const DiscreteState& state,
                            const PenalizedParams& params);

// Monotone map, length 2N:
//   first block:  -G_i(U) + H_tilde^k + (1/k) ln m_i
//   second block: (L_U^* M)_i
Eigen::VectorXd F_tilde(const HamiltonianSpec& spec, const TorusGrid& grid,
                        const DiscreteState& state,
                        const PenalizedParams& params);

// Flow field: first block of F_tilde scaled by m_i, second block unchanged.
// Its first block sums to zero for every state (mass identity).
Eigen::VectorXd F_bar(const HamiltonianSpec& spec, const TorusGrid& grid,
                      const DiscreteState& state,
                      const PenalizedParams& params);

// Log-coordinate right-hand side of the flow:
//   dW_i/dt = G_i(U) - H_tilde^k - (1/k) w_i,   dU/dt = -L_U^*(e^W).
Eigen::VectorXd F_bar_log(const HamiltonianSpec& spec, const TorusGrid& grid,
                          const LogState& logstate,
                          const PenalizedParams& params);

struct JacobianResult {
  Eigen::MatrixXd J; // 2N x 2N
  bool used_finite_differences;
};

// Exact one-sided Jacobian of F_bar, assembled from the active upwind
// branches.  Falls back to a column-wise central finite difference when
// some branch argument lies within the kink margin of switching.
JacobianResult jacobian_F_bar(const HamiltonianSpec& spec,
                              const TorusGrid& grid,
                              const DiscreteState& state,
                              const PenalizedParams& params);

// Smallest |branch argument| over all nodes and axes; the analytic
// Jacobian path requires this to exceed the kink margin.
double kink_distance(const HamiltonianSpec& spec, const TorusGrid& grid,
                     const Eigen::VectorXd& U);

// K = sum_l m_l * Hess(G_l), assembled from the active upwind branches.
// Positive semidefinite; annihilates constants.
Eigen::MatrixXd weighted_G_hessian(const HamiltonianSpec& spec,
                                   const TorusGrid& grid,
                                   const Eigen::VectorXd& U,
                                   const Eigen::VectorXd& M);

inline double kink_margin(const HamiltonianSpec& spec) {
  return 1e-8 * (1.0 + spec.P.cwiseAbs().maxCoeff());
}

} // namespace effham

#endif

#ifndef EFFHAM_DIAGNOSTICS_HPP
#define EFFHAM_DIAGNOSTICS_HPP

#include <Eigen/Dense>
#include <vector>

#include "effham/grid.hpp"
#include "effham/hamiltonian.hpp"
#include "effham/hrf.hpp"
#include "effham/operators.hpp"

namespace effham {

struct ErrorReport {
  double u_error;     // grid mean of |u - u_ref|^2
  double m_error;     // grid mean of |m - m_ref|
  double hbar_error;  // |H_tilde^k(state) - hbar_ref|
  double mass_drift;  // |mean(M) - 1|
  double min_density; // min(M)
};

struct ReferenceState {
  DiscreteState state;
  double hbar;
};

// Grid-mean distances of a state to a reference solution.  Throws on a
// grid-size mismatch.
ErrorReport error_report(const HamiltonianSpec& spec, const TorusGrid& grid,
                         const DiscreteState& state, const ReferenceState& ref,
                         const PenalizedParams& params);

// phi_bar = (1/N) sum m*_j ln(m*_j / m_j) + (1/2N) sum (u_j - u*_j)^2.
// Non-negative when both densities have mean one.  Evaluated through the
// log ratio so strongly concentrated roots (m* near the representability
// floor) do not overflow the quotient.
double lyapunov(const DiscreteState& state, const DiscreteState& root);

// Fills traj.lyapunov_series with phi_bar of every sample against `root`.
void attach_lyapunov(Trajectory& traj, const DiscreteState& root);

enum class MonotoneOp { f_tilde, f_bar };

// <op(a) - op(b), a - b> with states stacked as (M, U).  Non-negative for
// f_tilde (monotone map); may be negative for f_bar.
double monotonicity_gap(MonotoneOp op, const HamiltonianSpec& spec,
                        const TorusGrid& grid, const DiscreteState& a,
                        const DiscreteState& b, const PenalizedParams& params);

// Per-sample sum_i ((m_i - m~_i)^2 + (u_i - u~_i)^2) for two trajectories
// on the same time grid.  Throws on a time-grid mismatch.
std::vector<double> pair_distance_series(const Trajectory& traj_a,
                                         const Trajectory& traj_b);

} // namespace effham

#endif

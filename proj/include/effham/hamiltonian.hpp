#ifndef EFFHAM_HAMILTONIAN_HPP
#define EFFHAM_HAMILTONIAN_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>

#include "effham/grid.hpp"

namespace effham {

enum class Preset { minus_sin, two_cos, sin_sin, strong_mix };

Preset preset_from_name(const std::string& name);
std::string preset_name(Preset p);
int preset_dimension(Preset p);

// Hamiltonian H(x,p) = |p|^2/2 + V(x) with V one of the four presets,
// shifted by the momentum vector P.
struct HamiltonianSpec {
  Preset preset;
  Eigen::VectorXd P; // length d
};

// Density/value pair on the grid.  M is strictly positive; the normalized
// convention is mean(M) = 1 and mean(U) = 0.
struct DiscreteState {
  Eigen::VectorXd M;
  Eigen::VectorXd U;
};

double eval_V(Preset preset, const Eigen::VectorXd& x);
double eval_H(const HamiltonianSpec& spec, const Eigen::VectorXd& x,
              const Eigen::VectorXd& p);

// V(x_i) sampled on all grid nodes
Eigen::VectorXd potential_on_grid(const HamiltonianSpec& spec,
                                  const TorusGrid& grid);

// Upwind discretization: per node i,
//   G_i = 1/2 sum_axes [ min{P_a + (u_fwd - u_i)/h, 0}^2
//                      + max{P_a + (u_i - u_bwd)/h, 0}^2 ] + V(x_i).
Eigen::VectorXd discrete_hamiltonian(const HamiltonianSpec& spec,
                                     const TorusGrid& grid,
                                     const Eigen::VectorXd& U);

// One-sided Jacobian dG_i/du_j.  At a branch tie (argument exactly 0) the
// clamped branch is treated as active, so the derivative is 0 and rows sum
// to zero exactly.
Eigen::SparseMatrix<double> linearize(const HamiltonianSpec& spec,
                                      const TorusGrid& grid,
                                      const Eigen::VectorXd& U);

// Transpose action of linearize(U) on M, computed stencil-wise without
// assembling the matrix (hot path of the flow).
Eigen::VectorXd adjoint_apply(const HamiltonianSpec& spec,
                              const TorusGrid& grid,
                              const Eigen::VectorXd& U,
                              const Eigen::VectorXd& M);

} // namespace effham

#endif

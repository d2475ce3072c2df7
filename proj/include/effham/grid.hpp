#ifndef EFFHAM_GRID_HPP
#define EFFHAM_GRID_HPP

#include <Eigen/Dense>
#include <vector>

namespace effham {

// Uniform periodic grid on the d-torus, d in {1,2}, with row-major flat
// indexing.  Node coordinates are x = i*h per axis for i = 1..n, so the
// last node sits at 1, identified with 0.
struct TorusGrid {
  int d;
  int n_per_dim;
  int N;
  double h;
  // points(i, a) is the a-th coordinate of flat node i
  Eigen::MatrixXd points;
  // fwd[a](i) / bwd[a](i): flat index of the periodic neighbor of node i
  // along axis a
  std::vector<Eigen::VectorXi> fwd;
  std::vector<Eigen::VectorXi> bwd;
};

TorusGrid make_grid(int d, int n_per_dim);

// dir = +1 or -1
int neighbor(const TorusGrid& grid, int i, int axis, int dir);

} // namespace effham

#endif

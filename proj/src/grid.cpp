#include "effham/grid.hpp"

#include <stdexcept>

namespace effham {

TorusGrid make_grid(int d, int n_per_dim) {
  if (d != 1 && d != 2)
    throw std::invalid_argument("make_grid: dimension must be 1 or 2");
  if (n_per_dim < 2)
    throw std::invalid_argument("make_grid: need at least 2 nodes per axis");

  TorusGrid g;
  g.d = d;
  g.n_per_dim = n_per_dim;
  g.N = 1;
  for (int a = 0; a < d; ++a) g.N *= n_per_dim;
  g.h = 1.0 / n_per_dim;

  const int n = n_per_dim;
  g.points.resize(g.N, d);
  g.fwd.assign(d, Eigen::VectorXi(g.N));
  g.bwd.assign(d, Eigen::VectorXi(g.N));

  if (d == 1) {
    for (int i = 0; i < g.N; ++i) {
      g.points(i, 0) = (i + 1) * g.h;
      g.fwd[0](i) = (i + 1) % n;
      g.bwd[0](i) = (i - 1 + n) % n;
    }
  } else {
    for (int i = 0; i < g.N; ++i) {
      const int a0 = i / n, a1 = i % n;
      g.points(i, 0) = (a0 + 1) * g.h;
      g.points(i, 1) = (a1 + 1) * g.h;
      g.fwd[0](i) = ((a0 + 1) % n) * n + a1;
      g.bwd[0](i) = ((a0 - 1 + n) % n) * n + a1;
      g.fwd[1](i) = a0 * n + (a1 + 1) % n;
      g.bwd[1](i) = a0 * n + (a1 - 1 + n) % n;
    }
  }
  return g;
}

int neighbor(const TorusGrid& grid, int i, int axis, int dir) {
  if (i < 0 || i >= grid.N || axis < 0 || axis >= grid.d)
    throw std::out_of_range("neighbor: invalid node or axis index");
  return dir > 0 ? grid.fwd[axis](i) : grid.bwd[axis](i);
}

} // namespace effham

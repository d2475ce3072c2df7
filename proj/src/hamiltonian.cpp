#include "effham/hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace effham {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

Preset preset_from_name(const std::string& name) {
  if (name == "minus_sin") return Preset::minus_sin;
  if (name == "two_cos") return Preset::two_cos;
  if (name == "sin_sin") return Preset::sin_sin;
  if (name == "strong_mix") return Preset::strong_mix;
  throw std::invalid_argument("unknown preset: " + name);
}

std::string preset_name(Preset p) {
  switch (p) {
    case Preset::minus_sin: return "minus_sin";
    case Preset::two_cos: return "two_cos";
    case Preset::sin_sin: return "sin_sin";
    case Preset::strong_mix: return "strong_mix";
  }
  return "?";
}

int preset_dimension(Preset p) {
  return (p == Preset::two_cos || p == Preset::sin_sin) ? 2 : 1;
}

double eval_V(Preset preset, const Eigen::VectorXd& x) {
  switch (preset) {
    case Preset::minus_sin:
      return -std::sin(two_pi * x(0));
    case Preset::two_cos:
      return std::cos(two_pi * x(0)) + std::cos(two_pi * x(1));
    case Preset::sin_sin:
      return std::sin(two_pi * x(0)) * std::sin(two_pi * x(1));
    case Preset::strong_mix:
      return -10.0 * std::cos(two_pi * x(0)) - 10.0 * std::sin(two_pi * x(0));
  }
  return 0.0;
}

double eval_H(const HamiltonianSpec& spec, const Eigen::VectorXd& x,
              const Eigen::VectorXd& p) {
  return 0.5 * p.squaredNorm() + eval_V(spec.preset, x);
}

Eigen::VectorXd potential_on_grid(const HamiltonianSpec& spec,
                                  const TorusGrid& grid) {
  Eigen::VectorXd V(grid.N);
  for (int i = 0; i < grid.N; ++i)
    V(i) = eval_V(spec.preset, grid.points.row(i).transpose());
  return V;
}

Eigen::VectorXd discrete_hamiltonian(const HamiltonianSpec& spec,
                                     const TorusGrid& grid,
                                     const Eigen::VectorXd& U) {
  Eigen::VectorXd G = potential_on_grid(spec, grid);
  const double inv_h = 1.0 / grid.h;
  for (int a = 0; a < grid.d; ++a) {
    const double Pa = spec.P(a);
    const auto& fwd = grid.fwd[a];
    const auto& bwd = grid.bwd[a];
    for (int i = 0; i < grid.N; ++i) {
      const double alpha = Pa + (U(fwd(i)) - U(i)) * inv_h;
      const double beta = Pa + (U(i) - U(bwd(i))) * inv_h;
      const double mn = std::min(alpha, 0.0);
      const double mx = std::max(beta, 0.0);
      G(i) += 0.5 * (mn * mn + mx * mx);
    }
  }
  return G;
}

Eigen::SparseMatrix<double> linearize(const HamiltonianSpec& spec,
                                      const TorusGrid& grid,
                                      const Eigen::VectorXd& U) {
  const double inv_h = 1.0 / grid.h;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(grid.N) * (2 * grid.d + 1));
  for (int a = 0; a < grid.d; ++a) {
    const double Pa = spec.P(a);
    const auto& fwd = grid.fwd[a];
    const auto& bwd = grid.bwd[a];
    for (int i = 0; i < grid.N; ++i) {
      // d/du of min{alpha,0}^2/2 is min{alpha,0}*dalpha/du; the clamped
      // branch (argument >= 0) contributes exactly 0, so rows sum to zero.
      const double alpha = Pa + (U(fwd(i)) - U(i)) * inv_h;
      const double beta = Pa + (U(i) - U(bwd(i))) * inv_h;
      const double mn = std::min(alpha, 0.0) * inv_h;
      const double mx = std::max(beta, 0.0) * inv_h;
      if (mn != 0.0) {
        trips.emplace_back(i, fwd(i), mn);
        trips.emplace_back(i, i, -mn);
      }
      if (mx != 0.0) {
        trips.emplace_back(i, i, mx);
        trips.emplace_back(i, bwd(i), -mx);
      }
    }
  }
  Eigen::SparseMatrix<double> L(grid.N, grid.N);
  L.setFromTriplets(trips.begin(), trips.end());
  return L;
}

Eigen::VectorXd adjoint_apply(const HamiltonianSpec& spec,
                              const TorusGrid& grid,
                              const Eigen::VectorXd& U,
                              const Eigen::VectorXd& M) {
  const double inv_h = 1.0 / grid.h;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(grid.N);
  for (int a = 0; a < grid.d; ++a) {
    const double Pa = spec.P(a);
    const auto& fwd = grid.fwd[a];
    const auto& bwd = grid.bwd[a];
    for (int i = 0; i < grid.N; ++i) {
      const double alpha = Pa + (U(fwd(i)) - U(i)) * inv_h;
      const double beta = Pa + (U(i) - U(bwd(i))) * inv_h;
      const double mn = std::min(alpha, 0.0) * inv_h * M(i);
      const double mx = std::max(beta, 0.0) * inv_h * M(i);
      if (mn != 0.0) {
        out(fwd(i)) += mn;
        out(i) -= mn;
      }
      if (mx != 0.0) {
        out(i) += mx;
        out(bwd(i)) -= mx;
      }
    }
  }
  return out;
}

} // namespace effham

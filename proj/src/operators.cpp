#include "effham/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace effham {

namespace {

void require_positive(const Eigen::VectorXd& M) {
  for (int i = 0; i < M.size(); ++i)
    if (!(M(i) > 0.0))
      throw std::domain_error("density must be strictly positive (entry " +
                              std::to_string(i) + ")");
}

double weighted_estimate(const Eigen::VectorXd& G, const Eigen::VectorXd& M,
                         const Eigen::VectorXd& lnM, double k) {
  const double S = M.sum();
  return (M.dot(G) - M.dot(lnM) / k) / S;
}

} // namespace

double effective_H_estimate(const HamiltonianSpec& spec, const TorusGrid& grid,
                            const DiscreteState& state,
                            const PenalizedParams& params) {
  require_positive(state.M);
  const Eigen::VectorXd G = discrete_hamiltonian(spec, grid, state.U);
  const Eigen::VectorXd lnM = state.M.array().log();
  return weighted_estimate(G, state.M, lnM, params.k);
}

Eigen::VectorXd F_tilde(const HamiltonianSpec& spec, const TorusGrid& grid,
                        const DiscreteState& state,
                        const PenalizedParams& params) {
  require_positive(state.M);
  const int N = grid.N;
  const Eigen::VectorXd G = discrete_hamiltonian(spec, grid, state.U);
  const Eigen::VectorXd lnM = state.M.array().log();
  const double hb = weighted_estimate(G, state.M, lnM, params.k);
  Eigen::VectorXd out(2 * N);
  out.head(N) = -G.array() + hb + lnM.array() / params.k;
  out.tail(N) = adjoint_apply(spec, grid, state.U, state.M);
  return out;
}

Eigen::VectorXd F_bar(const HamiltonianSpec& spec, const TorusGrid& grid,
                      const DiscreteState& state,
                      const PenalizedParams& params) {
  const int N = grid.N;
  Eigen::VectorXd out = F_tilde(spec, grid, state, params);
  out.head(N).array() *= state.M.array();
  return out;
}

Eigen::VectorXd F_bar_log(const HamiltonianSpec& spec, const TorusGrid& grid,
                          const LogState& logstate,
                          const PenalizedParams& params) {
  const int N = grid.N;
  const Eigen::VectorXd M = logstate.W.array().exp();
  const Eigen::VectorXd G = discrete_hamiltonian(spec, grid, logstate.U);
  const double hb = weighted_estimate(G, M, logstate.W, params.k);
  Eigen::VectorXd out(2 * N);
  out.head(N) = G.array() - hb - logstate.W.array() / params.k;
  out.tail(N) = -adjoint_apply(spec, grid, logstate.U, M);
  return out;
}

double kink_distance(const HamiltonianSpec& spec, const TorusGrid& grid,
                     const Eigen::VectorXd& U) {
  const double inv_h = 1.0 / grid.h;
  double dist = std::numeric_limits<double>::infinity();
  for (int a = 0; a < grid.d; ++a) {
    const double Pa = spec.P(a);
    for (int i = 0; i < grid.N; ++i) {
      const double alpha = Pa + (U(grid.fwd[a](i)) - U(i)) * inv_h;
      const double beta = Pa + (U(i) - U(grid.bwd[a](i))) * inv_h;
      dist = std::min(dist, std::min(std::abs(alpha), std::abs(beta)));
    }
  }
  return dist;
}

// Per axis, the active forward branch of node l contributes
// (m_l/h^2) (e_f - e_l)(e_f - e_l)^T and the active backward branch
// (m_l/h^2) (e_l - e_b)(e_l - e_b)^T.
Eigen::MatrixXd weighted_G_hessian(const HamiltonianSpec& spec,
                                   const TorusGrid& grid,
                                   const Eigen::VectorXd& U,
                                   const Eigen::VectorXd& M) {
  const int N = grid.N;
  const double inv_h = 1.0 / grid.h;
  const double inv_h2 = inv_h * inv_h;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(N, N);
  for (int a = 0; a < grid.d; ++a) {
    const double Pa = spec.P(a);
    for (int l = 0; l < N; ++l) {
      const int f = grid.fwd[a](l), b = grid.bwd[a](l);
      const double alpha = Pa + (U(f) - U(l)) * inv_h;
      const double beta = Pa + (U(l) - U(b)) * inv_h;
      if (alpha < 0.0) {
        const double w = M(l) * inv_h2;
        K(f, f) += w; K(l, l) += w;
        K(f, l) -= w; K(l, f) -= w;
      }
      if (beta > 0.0) {
        const double w = M(l) * inv_h2;
        K(l, l) += w; K(b, b) += w;
        K(l, b) -= w; K(b, l) -= w;
      }
    }
  }
  return K;
}

namespace {

Eigen::MatrixXd finite_difference_jacobian(const HamiltonianSpec& spec,
                                           const TorusGrid& grid,
                                           const DiscreteState& state,
                                           const PenalizedParams& params) {
  const int N = grid.N;
  Eigen::MatrixXd J(2 * N, 2 * N);
  DiscreteState plus = state, minus = state;
  for (int j = 0; j < 2 * N; ++j) {
    double& xp = j < N ? plus.M(j) : plus.U(j - N);
    double& xm = j < N ? minus.M(j) : minus.U(j - N);
    const double x0 = xp;
    double step = 1e-6 * (1.0 + std::abs(x0));
    if (j < N) step = std::min(step, 0.5 * x0); // keep density positive
    xp = x0 + step;
    xm = x0 - step;
    J.col(j) =
        (F_bar(spec, grid, plus, params) - F_bar(spec, grid, minus, params)) /
        (2.0 * step);
    xp = x0;
    xm = x0;
  }
  return J;
}

} // namespace

JacobianResult jacobian_F_bar(const HamiltonianSpec& spec,
                              const TorusGrid& grid,
                              const DiscreteState& state,
                              const PenalizedParams& params) {
  require_positive(state.M);
  const int N = grid.N;
  if (kink_distance(spec, grid, state.U) < kink_margin(spec))
    return {finite_difference_jacobian(spec, grid, state, params), true};

  const double k = params.k;
  const Eigen::VectorXd& M = state.M;
  const Eigen::VectorXd G = discrete_hamiltonian(spec, grid, state.U);
  const Eigen::VectorXd lnM = M.array().log();
  const double S = M.sum();
  const double hb = weighted_estimate(G, M, lnM, k);
  const Eigen::MatrixXd L =
      Eigen::MatrixXd(linearize(spec, grid, state.U));
  const Eigen::VectorXd adj = L.transpose() * M;

  // first-block entries F_i = m_i A_i with A_i = -G_i + hb + (ln m_i)/k
  const Eigen::VectorXd A = -G.array() + hb + lnM.array() / k;
  // dhb/dm_j and dhb/du_j
  const Eigen::VectorXd dhb_dm =
      (G.array() - (lnM.array() + 1.0) / k - hb) / S;
  const Eigen::VectorXd dhb_du = adj / S;

  Eigen::MatrixXd J(2 * N, 2 * N);
  auto topleft = J.topLeftCorner(N, N);
  topleft = M * dhb_dm.transpose();
  topleft.diagonal() += (A.array() + 1.0 / k).matrix();
  J.topRightCorner(N, N) =
      M * dhb_du.transpose() - M.asDiagonal() * L;
  J.bottomLeftCorner(N, N) = L.transpose();
  J.bottomRightCorner(N, N) = weighted_G_hessian(spec, grid, state.U, M);
  return {std::move(J), false};
}

} // namespace effham

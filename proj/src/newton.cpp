#include "effham/newton.hpp"

#include <Eigen/LU>
#include <cmath>
#include <limits>

namespace effham {

Eigen::VectorXd lu_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const double rc = lu.rcond();
  if (!(rc > 1e-14)) {
    const double cond =
        rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
    throw SingularMatrixError(cond);
  }
  return lu.solve(b);
}

DiscreteState newton_step(const DiscreteState& state,
                          const HamiltonianSpec& spec, const TorusGrid& grid,
                          const PenalizedParams& params,
                          const NewtonConfig& config) {
  const int N = grid.N;
  const Eigen::VectorXd F = F_bar(spec, grid, state, params);
  Eigen::MatrixXd A;
  if (config.kappa != 0.0) {
    A = config.kappa * jacobian_F_bar(spec, grid, state, params).J;
    A.diagonal().array() += config.tau;
  } else {
    A = config.tau * Eigen::MatrixXd::Identity(2 * N, 2 * N);
  }
  const Eigen::VectorXd d = lu_solve(A, F);
  DiscreteState next;
  next.M = state.M - d.head(N);
  next.U = state.U - d.tail(N);
  for (int i = 0; i < N; ++i)
    if (!(next.M(i) > 0.0)) throw PositivityError(i);
  return next;
}

SolveResult newton_solve(const DiscreteState& initial,
                         const HamiltonianSpec& spec, const TorusGrid& grid,
                         const PenalizedParams& params,
                         const NewtonConfig& config) {
  SolveResult result;
  DiscreteState current = initial;
  DiscreteState best = initial;
  double best_res = std::numeric_limits<double>::infinity();
  for (int it = 0; it <= config.max_iters; ++it) {
    const Eigen::VectorXd F = F_bar(spec, grid, current, params);
    const double res = F.lpNorm<Eigen::Infinity>();
    result.residual_history.push_back(res);
    result.mass_history.push_back(current.M.mean());
    result.min_density_history.push_back(current.M.minCoeff());
    if (res < best_res) {
      best_res = res;
      best = current;
    }
    result.iterations = it;
    if (res <= config.residual_tol) {
      result.converged = true;
      result.state = current;
      return result;
    }
    if (it == config.max_iters) break;
    current = newton_step(current, spec, grid, params, config);
  }
  result.state = best;
  return result;
}

namespace {

struct GibbsState {
  Eigen::VectorXd G;
  Eigen::VectorXd W;
  Eigen::VectorXd M;
  double hbar;
};

// Density block in closed form: w = k(G - hbar) with hbar the log-sum-exp
// level that makes mean(e^w) = 1.  Exponents are bounded above by ln N, so
// the evaluation never overflows; the floor at -700 keeps e^w
// representable where the true density underflows.
GibbsState gibbs_state(const Eigen::VectorXd& U, const HamiltonianSpec& spec,
                       const TorusGrid& grid, double k) {
  GibbsState s;
  s.G = discrete_hamiltonian(spec, grid, U);
  const double gmax = s.G.maxCoeff();
  const double lse =
      std::log(((s.G.array() - gmax) * k).exp().mean()) / k;
  s.hbar = gmax + lse;
  s.W = ((s.G.array() - s.hbar) * k).max(-700.0);
  s.M = s.W.array().exp();
  return s;
}

} // namespace

ReducedRootResult reduced_newton_solve(const Eigen::VectorXd& U0,
                                       const HamiltonianSpec& spec,
                                       const TorusGrid& grid,
                                       const PenalizedParams& params,
                                       double tol, int max_iters) {
  const int N = grid.N;
  const double k = params.k;
  const double w_floor = -55.0; // below this the u-rows carry no signal
  Eigen::VectorXd U = U0.array() - U0.mean();

  GibbsState s = gibbs_state(U, spec, grid, k);
  Eigen::VectorXd R = adjoint_apply(spec, grid, U, s.M);
  double rn = R.lpNorm<Eigen::Infinity>();

  Eigen::VectorXd best_U = U;
  GibbsState best_s = s;
  double best_rn = rn;
  int it = 0;
  double mu = 0.0;

  for (; it < max_iters && rn >= tol; ++it) {
    // restrict the update to nodes carrying density, plus a two-cell halo
    std::vector<bool> live(N);
    for (int i = 0; i < N; ++i) live[i] = s.W(i) >= w_floor;
    for (int a = 0; a < grid.d; ++a)
      for (int pass = 0; pass < 2; ++pass) {
        std::vector<bool> grown = live;
        for (int i = 0; i < N; ++i)
          if (live[i]) {
            grown[grid.fwd[a](i)] = true;
            grown[grid.bwd[a](i)] = true;
          }
        live.swap(grown);
      }
    std::vector<int> idx;
    for (int i = 0; i < N; ++i)
      if (live[i]) idx.push_back(i);
    const int nu = static_cast<int>(idx.size());

    // Hessian of the reduced objective N * hbar(U):
    //   K + k (L^T diag(M) L - R R^T / sum M), positive semidefinite with
    //   constants in its null space; the rank-one pin fixes the gauge.
    const Eigen::MatrixXd K = weighted_G_hessian(spec, grid, U, s.M);
    const Eigen::MatrixXd L(linearize(spec, grid, U));
    const double S = s.M.sum();
    Eigen::MatrixXd J =
        K + k * (L.transpose() * s.M.asDiagonal() * L -
                 R * R.transpose() / S);
    Eigen::MatrixXd Jr(nu, nu);
    Eigen::VectorXd Rr(nu);
    for (int a = 0; a < nu; ++a) {
      Rr(a) = R(idx[a]);
      for (int b = 0; b < nu; ++b) Jr(a, b) = J(idx[a], idx[b]);
    }
    Jr.array() += 1.0 / nu;
    if (mu > 0.0) Jr.diagonal().array() += mu;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(Jr);
    Eigen::VectorXd d;
    if (ldlt.info() == Eigen::Success) d = ldlt.solve(Rr);
    const bool solvable = ldlt.info() == Eigen::Success && d.allFinite();

    bool accepted = false;
    if (solvable) {
      const double base = R.squaredNorm();
      double lam = 1.0;
      for (int bt = 0; bt < 45; ++bt, lam *= 0.5) {
        Eigen::VectorXd Un = U;
        for (int a = 0; a < nu; ++a) Un(idx[a]) -= lam * d(a);
        Un.array() -= Un.mean();
        GibbsState sn = gibbs_state(Un, spec, grid, k);
        Eigen::VectorXd Rn = adjoint_apply(spec, grid, Un, sn.M);
        if (Rn.allFinite() &&
            Rn.squaredNorm() < base * (1.0 - 1e-4 * lam)) {
          U = std::move(Un);
          s = std::move(sn);
          R = std::move(Rn);
          rn = R.lpNorm<Eigen::Infinity>();
          accepted = true;
          break;
        }
      }
    }
    if (accepted) {
      mu *= 0.25;
      if (mu < 1e-12) mu = 0.0;
      if (rn < best_rn) {
        best_rn = rn;
        best_U = U;
        best_s = s;
      }
    } else {
      // stalled or singular: damp harder, or give up and keep the best
      mu = mu == 0.0 ? 1e-8 * (1.0 + Jr.diagonal().maxCoeff()) : 16.0 * mu;
      if (mu > 1e10) break;
    }
  }

  ReducedRootResult result;
  result.state.M = best_s.M;
  result.state.U = best_U;
  result.W = best_s.W;
  result.hbar = best_s.hbar;
  result.iterations = it;
  result.residual = F_bar(spec, grid, result.state, params)
                        .lpNorm<Eigen::Infinity>();
  return result;
}

} // namespace effham

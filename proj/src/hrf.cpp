#include "effham/hrf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace effham {

namespace {

// Right-hand side with preallocated buffers; the integrator calls this a
// few hundred million times for the stiffest runs, so no allocation and no
// matrix assembly here.
struct FlowRhs {
  const TorusGrid& grid;
  const HamiltonianSpec& spec;
  double k;
  Eigen::VectorXd V; // potential, fixed
  mutable Eigen::VectorXd M, G;

  FlowRhs(const HamiltonianSpec& s, const TorusGrid& g, double k_)
      : grid(g), spec(s), k(k_), V(potential_on_grid(s, g)),
        M(g.N), G(g.N) {}

  void operator()(const Eigen::VectorXd& y, Eigen::VectorXd& dy) const {
    const int N = grid.N;
    const double inv_h = 1.0 / grid.h;
    const auto W = y.head(N);
    const auto U = y.tail(N);
    M = W.array().exp();
    G = V;
    for (int a = 0; a < grid.d; ++a) {
      const double Pa = spec.P(a);
      const int* fwd = grid.fwd[a].data();
      const int* bwd = grid.bwd[a].data();
      for (int i = 0; i < N; ++i) {
        const double alpha = Pa + (U(fwd[i]) - U(i)) * inv_h;
        const double beta = Pa + (U(i) - U(bwd[i])) * inv_h;
        const double mn = std::min(alpha, 0.0);
        const double mx = std::max(beta, 0.0);
        G(i) += 0.5 * (mn * mn + mx * mx);
      }
    }
    const double S = M.sum();
    const double hb = (M.dot(G) - M.dot(W) / k) / S;
    dy.head(N) = G.array() - hb - W.array() / k;
    auto dU = dy.tail(N);
    dU.setZero();
    for (int a = 0; a < grid.d; ++a) {
      const double Pa = spec.P(a);
      const int* fwd = grid.fwd[a].data();
      const int* bwd = grid.bwd[a].data();
      for (int i = 0; i < N; ++i) {
        const double alpha = Pa + (U(fwd[i]) - U(i)) * inv_h;
        const double beta = Pa + (U(i) - U(bwd[i])) * inv_h;
        const double mn = std::min(alpha, 0.0) * inv_h * M(i);
        const double mx = std::max(beta, 0.0) * inv_h * M(i);
        if (mn != 0.0) {
          dU(fwd[i]) -= mn;
          dU(i) += mn;
        }
        if (mx != 0.0) {
          dU(i) -= mx;
          dU(bwd[i]) += mx;
        }
      }
    }
  }
};

} // namespace

DiscreteState default_initial(const TorusGrid& grid) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  DiscreteState s;
  s.M.resize(grid.N);
  s.U.resize(grid.N);
  for (int i = 0; i < grid.N; ++i) {
    const double x1 = grid.points(i, 0);
    s.M(i) = 1.0 + 0.9 * std::cos(two_pi * x1);
    s.U(i) = 0.2 * std::cos(two_pi * x1);
  }
  s.M /= s.M.mean();
  s.U.array() -= s.U.mean();
  return s;
}

Trajectory integrate_hrf(const DiscreteState& initial,
                         const HamiltonianSpec& spec, const TorusGrid& grid,
                         const PenalizedParams& params,
                         const FlowConfig& config) {
  const int N = grid.N;
  if ((initial.M.array() <= 0.0).any())
    throw std::domain_error("integrate_hrf: initial density must be positive");
  for (size_t i = 1; i < config.sample_times.size(); ++i)
    if (config.sample_times[i] <= config.sample_times[i - 1])
      throw std::invalid_argument("integrate_hrf: sample times must increase");

  FlowRhs rhs(spec, grid, params.k);

  // Dormand-Prince 5(4) tableau with FSAL
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                      a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                      a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  Eigen::VectorXd y(2 * N), ynew(2 * N), ytmp(2 * N), err(2 * N);
  Eigen::VectorXd k1(2 * N), k2(2 * N), k3(2 * N), k4(2 * N), k5(2 * N),
      k6(2 * N), k7(2 * N);
  y.head(N) = initial.M.array().log();
  y.tail(N) = initial.U;

  Trajectory traj;
  auto record = [&](double t) {
    DiscreteState s;
    s.M = y.head(N).array().exp();
    s.U = y.tail(N);
    traj.times.push_back(t);
    traj.hbar_series.push_back(
        effective_H_estimate(spec, grid, s, params));
    traj.mass_series.push_back(s.M.mean());
    traj.min_density_series.push_back(s.M.minCoeff());
    traj.states.push_back(std::move(s));
  };

  double t = 0.0;
  size_t next_sample = 0;
  while (next_sample < config.sample_times.size() &&
         config.sample_times[next_sample] <= 0.0) {
    record(t);
    ++next_sample;
  }

  rhs(y, k1);
  traj.n_rhs_evals = 1;
  double h = config.initial_step;
  double err_prev = 1.0;
  const double alpha = 0.7 / 5.0, beta = 0.4 / 5.0;

  auto error_norm = [&](const Eigen::VectorXd& e, const Eigen::VectorXd& y0,
                        const Eigen::VectorXd& y1) {
    double worst = 0.0;
    for (int i = 0; i < e.size(); ++i) {
      const double sc = config.abs_tol +
                        config.rel_tol *
                            std::max(std::abs(y0(i)), std::abs(y1(i)));
      worst = std::max(worst, std::abs(e(i)) / sc);
    }
    return worst;
  };

  while (t < config.T) {
    if (traj.n_steps >= config.max_steps)
      throw std::runtime_error("integrate_hrf: max_steps exceeded at t=" +
                               std::to_string(t));
    bool hit_sample = false;
    double target = std::min(t + h, config.T);
    if (next_sample < config.sample_times.size() &&
        config.sample_times[next_sample] <= target) {
      target = config.sample_times[next_sample];
      hit_sample = true;
    }
    const double hs = target - t;
    if (hs <= 1e-15 * std::max(1.0, std::abs(t)))
      throw std::runtime_error("integrate_hrf: step size underflow at t=" +
                               std::to_string(t));

    ytmp = y + hs * a21 * k1;
    rhs(ytmp, k2);
    ytmp = y + hs * (a31 * k1 + a32 * k2);
    rhs(ytmp, k3);
    ytmp = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(ytmp, k4);
    ytmp = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(ytmp, k5);
    ytmp = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(ytmp, k6);
    ynew = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(ynew, k7);
    traj.n_rhs_evals += 6;

    err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = error_norm(err, y, ynew);
    if (!std::isfinite(en))
      throw std::runtime_error("integrate_hrf: non-finite state at t=" +
                               std::to_string(t));
    ++traj.n_steps;

    if (en <= 1.0) {
      t = target;
      y.swap(ynew);
      k1.swap(k7); // FSAL
      if (hit_sample) {
        record(t);
        ++next_sample;
      }
      if (config.stop) {
        LogState ls{y.head(N), y.tail(N)};
        if (config.stop(t, ls)) {
          traj.stopped_early = true;
          traj.stop_time = t;
          // expose the stop state as the final sample
          if (traj.times.empty() || traj.times.back() != t) record(t);
          break;
        }
      }
      const double fac = 0.9 * std::pow(std::max(en, 1e-10), -alpha) *
                         std::pow(err_prev, beta);
      h = hs * std::clamp(fac, 0.2, 5.0);
      err_prev = std::max(en, 1e-10);
    } else {
      h = hs * std::max(0.2, 0.9 * std::pow(en, -0.2));
    }
  }
  return traj;
}

} // namespace effham

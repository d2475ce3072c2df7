#include "effham/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace effham {

namespace {

void require_positive(const Eigen::VectorXd& M, const char* what) {
  for (int i = 0; i < M.size(); ++i)
    if (!(M(i) > 0.0))
      throw std::domain_error(std::string(what) +
                              " density must be strictly positive (entry " +
                              std::to_string(i) + ")");
}

} // namespace

ErrorReport error_report(const HamiltonianSpec& spec, const TorusGrid& grid,
                         const DiscreteState& state, const ReferenceState& ref,
                         const PenalizedParams& params) {
  if (state.M.size() != ref.state.M.size() ||
      state.U.size() != ref.state.U.size() || state.M.size() != grid.N)
    throw std::invalid_argument("error_report: grid mismatch");
  const double N = static_cast<double>(grid.N);
  ErrorReport r;
  r.u_error = (state.U - ref.state.U).squaredNorm() / N;
  r.m_error = (state.M - ref.state.M).cwiseAbs().sum() / N;
  r.hbar_error =
      std::abs(effective_H_estimate(spec, grid, state, params) - ref.hbar);
  r.mass_drift = std::abs(state.M.mean() - 1.0);
  r.min_density = state.M.minCoeff();
  return r;
}

double lyapunov(const DiscreteState& state, const DiscreteState& root) {
  if (state.M.size() != root.M.size() || state.U.size() != root.U.size())
    throw std::invalid_argument("lyapunov: grid mismatch");
  require_positive(state.M, "lyapunov: state");
  require_positive(root.M, "lyapunov: root");
  const double N = static_cast<double>(state.M.size());
  const double entropy =
      (root.M.array() * (root.M.array().log() - state.M.array().log())).sum() /
      N;
  const double quad = (state.U - root.U).squaredNorm() / (2.0 * N);
  return entropy + quad;
}

void attach_lyapunov(Trajectory& traj, const DiscreteState& root) {
  traj.lyapunov_series.clear();
  traj.lyapunov_series.reserve(traj.states.size());
  for (const DiscreteState& s : traj.states)
    traj.lyapunov_series.push_back(lyapunov(s, root));
}

double monotonicity_gap(MonotoneOp op, const HamiltonianSpec& spec,
                        const TorusGrid& grid, const DiscreteState& a,
                        const DiscreteState& b, const PenalizedParams& params) {
  const int N = grid.N;
  const Eigen::VectorXd fa = op == MonotoneOp::f_tilde
                                 ? F_tilde(spec, grid, a, params)
                                 : F_bar(spec, grid, a, params);
  const Eigen::VectorXd fb = op == MonotoneOp::f_tilde
                                 ? F_tilde(spec, grid, b, params)
                                 : F_bar(spec, grid, b, params);
  Eigen::VectorXd diff(2 * N);
  diff.head(N) = a.M - b.M;
  diff.tail(N) = a.U - b.U;
  return (fa - fb).dot(diff);
}

std::vector<double> pair_distance_series(const Trajectory& traj_a,
                                         const Trajectory& traj_b) {
  if (traj_a.times.size() != traj_b.times.size())
    throw std::invalid_argument("pair_distance_series: time grids differ");
  for (size_t s = 0; s < traj_a.times.size(); ++s)
    if (std::abs(traj_a.times[s] - traj_b.times[s]) > 1e-12)
      throw std::invalid_argument("pair_distance_series: time grids differ");
  std::vector<double> series;
  series.reserve(traj_a.times.size());
  for (size_t s = 0; s < traj_a.times.size(); ++s) {
    const DiscreteState& x = traj_a.states[s];
    const DiscreteState& y = traj_b.states[s];
    series.push_back((x.M - y.M).squaredNorm() + (x.U - y.U).squaredNorm());
  }
  return series;
}

} // namespace effham

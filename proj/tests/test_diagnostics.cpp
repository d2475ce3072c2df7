#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>

#include "effham/diagnostics.hpp"
#include "effham/grid.hpp"
#include "effham/hamiltonian.hpp"
#include "effham/hrf.hpp"
#include "effham/newton.hpp"

using namespace effham;

namespace {

HamiltonianSpec pendulum(double P) {
  Eigen::VectorXd v(1);
  v << P;
  return {Preset::minus_sin, v};
}

} // namespace

TEST_CASE("error report against a reference") {
  const TorusGrid g = make_grid(1, 8);
  const HamiltonianSpec spec = pendulum(0);
  const PenalizedParams k{50.0};
  const DiscreteState st = default_initial(g);
  const ReferenceState ref{st, effective_H_estimate(spec, g, st, k)};

  const ErrorReport same = error_report(spec, g, st, ref, k);
  CHECK(same.u_error == 0.0);
  CHECK(same.m_error == 0.0);
  CHECK(same.hbar_error == 0.0);
  CHECK(std::abs(same.mass_drift) <= 1e-14);
  CHECK(same.min_density == doctest::Approx(0.1).epsilon(1e-12));

  DiscreteState moved = st;
  moved.U.array() += 0.1; // squared-mean metric picks up 0.01 per node
  const ErrorReport off = error_report(spec, g, moved, ref, k);
  CHECK(off.u_error == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(off.m_error == 0.0);

  const TorusGrid other = make_grid(1, 10);
  const DiscreteState wrong = default_initial(other);
  CHECK_THROWS_AS(error_report(spec, other, wrong, ref, k),
                  std::invalid_argument);
}

TEST_CASE("Lyapunov value vanishes only at the root") {
  const TorusGrid g = make_grid(1, 16);
  const HamiltonianSpec spec = pendulum(1.8);
  const PenalizedParams k{10.0};
  const SolveResult root =
      newton_solve(default_initial(g), spec, g, k, NewtonConfig{});
  REQUIRE(root.converged);

  CHECK(std::abs(lyapunov(root.state, root.state)) <= 1e-14);
  CHECK(lyapunov(default_initial(g), root.state) > 0.0);

  DiscreteState bad = default_initial(g);
  bad.M(0) = 0.0;
  CHECK_THROWS_AS(lyapunov(bad, root.state), std::domain_error);
}

TEST_CASE("Lyapunov series decreases along the flow") {
  const TorusGrid g = make_grid(1, 16);
  const HamiltonianSpec spec = pendulum(1.8);
  const PenalizedParams k{10.0};
  const SolveResult root =
      newton_solve(default_initial(g), spec, g, k, NewtonConfig{});
  REQUIRE(root.converged);

  FlowConfig fc;
  fc.T = 10.0;
  fc.sample_times.resize(21);
  for (int i = 0; i <= 20; ++i) fc.sample_times[i] = 0.5 * i;
  Trajectory traj = integrate_hrf(default_initial(g), spec, g, k, fc);
  attach_lyapunov(traj, root.state);
  REQUIRE(traj.lyapunov_series.size() == traj.times.size());
  for (size_t i = 1; i < traj.lyapunov_series.size(); ++i)
    CHECK(traj.lyapunov_series[i] <= traj.lyapunov_series[i - 1] + 1e-9);
  CHECK(traj.lyapunov_series.back() < 1e-6 * traj.lyapunov_series.front());
}

TEST_CASE("monotonicity gap for the two operator variants") {
  const TorusGrid g = make_grid(1, 12);
  const HamiltonianSpec spec = pendulum(0.5);
  const PenalizedParams k{100.0};
  std::mt19937_64 rng(13);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 100; ++trial) {
    DiscreteState a{Eigen::VectorXd(g.N), Eigen::VectorXd(g.N)};
    DiscreteState b{Eigen::VectorXd(g.N), Eigen::VectorXd(g.N)};
    for (int i = 0; i < g.N; ++i) {
      a.M(i) = std::exp(0.3 * gauss(rng));
      b.M(i) = std::exp(0.3 * gauss(rng));
      a.U(i) = 0.5 * gauss(rng);
      b.U(i) = 0.5 * gauss(rng);
    }
    a.M /= a.M.mean();
    b.M /= b.M.mean();
    const double gap = monotonicity_gap(MonotoneOp::f_tilde, spec, g, a, b, k);
    Eigen::VectorXd d(2 * g.N);
    d << a.M - b.M, a.U - b.U;
    CHECK(gap >= -1e-10 * (d.norm() + 1.0));
  }
}

TEST_CASE("pair distance series") {
  const TorusGrid g = make_grid(1, 4);
  Trajectory a, b;
  a.times = {0.0, 1.0};
  b.times = {0.0, 1.0};
  DiscreteState s1{Eigen::VectorXd::Ones(4), Eigen::VectorXd::Zero(4)};
  DiscreteState s2 = s1;
  s2.M(0) = 1.5;
  s2.U(1) = -2.0;
  a.states = {s1, s1};
  b.states = {s2, s1};
  const std::vector<double> d = pair_distance_series(a, b);
  REQUIRE(d.size() == 2);
  CHECK(d[0] == doctest::Approx(0.25 + 4.0).epsilon(1e-14));
  CHECK(d[1] == 0.0);

  b.times = {0.0, 1.5};
  CHECK_THROWS_AS(pair_distance_series(a, b), std::invalid_argument);
}

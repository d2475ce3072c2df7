#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "effham/grid.hpp"
#include "effham/hamiltonian.hpp"
#include "effham/hrf.hpp"
#include "effham/newton.hpp"
#include "effham/operators.hpp"

using namespace effham;

namespace {

HamiltonianSpec pendulum(double P) {
  Eigen::VectorXd v(1);
  v << P;
  return {Preset::minus_sin, v};
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  v.back() = b;
  return v;
}

} // namespace

TEST_CASE("default initial datum") {
  const TorusGrid g = make_grid(1, 4);
  const DiscreteState st = default_initial(g);
  // cos(2 pi x) at x = {.25, .5, .75, 1} is {0, -1, 0, 1}
  CHECK(st.M(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(st.M(1) == doctest::Approx(0.1).epsilon(1e-13));
  CHECK(st.M(2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(st.M(3) == doctest::Approx(1.9).epsilon(1e-14));
  CHECK(std::abs(st.M.mean() - 1.0) <= 1e-14);
  CHECK(std::abs(st.U.mean()) <= 1e-14);

  const TorusGrid g2 = make_grid(2, 6);
  const DiscreteState st2 = default_initial(g2);
  CHECK(std::abs(st2.M.mean() - 1.0) <= 1e-13);
  CHECK(std::abs(st2.U.mean()) <= 1e-13);
  CHECK(st2.M.minCoeff() > 0.0);
}

TEST_CASE("a stationary state stays put") {
  const TorusGrid g = make_grid(1, 16);
  const HamiltonianSpec spec = pendulum(1.8);
  const PenalizedParams k{10.0};
  NewtonConfig ncfg;
  ncfg.residual_tol = 1e-13;
  const SolveResult root =
      newton_solve(default_initial(g), spec, g, k, ncfg);
  REQUIRE(root.converged);

  FlowConfig fc;
  fc.T = 2.0;
  fc.rel_tol = 1e-10;
  fc.abs_tol = 1e-12;
  fc.sample_times = {0.0, 2.0};
  const Trajectory traj = integrate_hrf(root.state, spec, g, k, fc);
  CHECK((traj.states.back().M - root.state.M).lpNorm<Eigen::Infinity>() <=
        1e-8);
  CHECK((traj.states.back().U - root.state.U).lpNorm<Eigen::Infinity>() <=
        1e-8);
}

TEST_CASE("flow reaches the stationary estimate") {
  const TorusGrid g = make_grid(1, 16);
  const HamiltonianSpec spec = pendulum(1.8);
  const PenalizedParams k{10.0};
  const SolveResult root =
      newton_solve(default_initial(g), spec, g, k, NewtonConfig{});
  REQUIRE(root.converged);
  const double hbar_root = effective_H_estimate(spec, g, root.state, k);

  FlowConfig fc;
  fc.T = 30.0;
  fc.sample_times = {0.0, 30.0};
  const Trajectory traj = integrate_hrf(default_initial(g), spec, g, k, fc);
  CHECK(std::abs(traj.hbar_series.back() - hbar_root) <= 1e-6);
}

TEST_CASE("mass and mean-value conservation along the flow") {
  const TorusGrid g = make_grid(1, 20);
  const HamiltonianSpec spec = pendulum(0.5);
  const PenalizedParams k{100.0};
  FlowConfig fc;
  fc.T = 5.0;
  fc.rel_tol = 1e-8;
  fc.abs_tol = 1e-10;
  fc.sample_times = linspace(0, 5, 26);
  const Trajectory traj = integrate_hrf(default_initial(g), spec, g, k, fc);
  REQUIRE(traj.times.size() == 26);
  for (size_t i = 0; i < traj.times.size(); ++i) {
    CHECK(std::abs(traj.mass_series[i] - 1.0) <= 1e-8);
    CHECK(std::abs(traj.states[i].U.mean()) <= 1e-8);
    CHECK(traj.min_density_series[i] > 0.0);
  }
  // sample instants come back as requested, strictly increasing
  for (size_t i = 1; i < traj.times.size(); ++i)
    CHECK(traj.times[i] > traj.times[i - 1]);
  CHECK(traj.states.size() == traj.times.size());
  CHECK(traj.hbar_series.size() == traj.times.size());
}

TEST_CASE("tightening tolerances does not move the endpoint") {
  const TorusGrid g = make_grid(1, 16);
  const HamiltonianSpec spec = pendulum(0.3);
  const PenalizedParams k{100.0};
  FlowConfig coarse;
  coarse.T = 5.0;
  coarse.rel_tol = 1e-8;
  coarse.abs_tol = 1e-10;
  coarse.sample_times = {0.0, 5.0};
  FlowConfig fine = coarse;
  fine.rel_tol = 1e-10;
  fine.abs_tol = 1e-12;
  const Trajectory a = integrate_hrf(default_initial(g), spec, g, k, coarse);
  const Trajectory b = integrate_hrf(default_initial(g), spec, g, k, fine);
  CHECK(std::abs(a.hbar_series.back() - b.hbar_series.back()) <= 1e-7);
}

TEST_CASE("stop callback ends the run early") {
  const TorusGrid g = make_grid(1, 16);
  const HamiltonianSpec spec = pendulum(0.5);
  const PenalizedParams k{100.0};
  FlowConfig fc;
  fc.T = 10.0;
  fc.sample_times = {0.0, 10.0};
  fc.stop = [](double t, const LogState&) { return t >= 1.0; };
  const Trajectory traj = integrate_hrf(default_initial(g), spec, g, k, fc);
  CHECK(traj.stopped_early);
  CHECK(traj.stop_time >= 1.0);
  CHECK(traj.stop_time < 10.0);
  // the state at the stop becomes the last sample
  REQUIRE(!traj.times.empty());
  CHECK(traj.times.back() == traj.stop_time);
}

TEST_CASE("guard rails") {
  const TorusGrid g = make_grid(1, 8);
  const HamiltonianSpec spec = pendulum(0);
  const PenalizedParams k{10.0};
  DiscreteState bad = default_initial(g);
  bad.M(3) = -0.5;
  FlowConfig fc;
  fc.T = 1.0;
  fc.sample_times = {0.0, 1.0};
  CHECK_THROWS_AS(integrate_hrf(bad, spec, g, k, fc), std::domain_error);

  FlowConfig capped;
  capped.T = 10.0;
  capped.sample_times = {0.0, 10.0};
  capped.max_steps = 3;
  CHECK_THROWS_AS(integrate_hrf(default_initial(g), spec, g, k, capped),
                  std::runtime_error);

  FlowConfig unordered;
  unordered.T = 1.0;
  unordered.sample_times = {0.5, 0.2};
  CHECK_THROWS_AS(integrate_hrf(default_initial(g), spec, g, k, unordered),
                  std::invalid_argument);
}

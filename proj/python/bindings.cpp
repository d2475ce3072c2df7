#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "effham/analytic.hpp"
#include "effham/diagnostics.hpp"
#include "effham/hamiltonian.hpp"
#include "effham/hrf.hpp"
#include "effham/newton.hpp"
#include "effham/operators.hpp"

namespace py = pybind11;
using namespace effham;

namespace {

HamiltonianSpec make_spec(const std::string& preset,
                          const Eigen::VectorXd& P) {
  return HamiltonianSpec{preset_from_name(preset), P};
}

FlowConfig make_flow_config(double T, double rel_tol, double abs_tol,
                            const std::vector<double>& sample_times,
                            long long max_steps, double initial_step) {
  FlowConfig fc;
  fc.T = T;
  fc.rel_tol = rel_tol;
  fc.abs_tol = abs_tol;
  fc.sample_times = sample_times.empty()
                        ? std::vector<double>{0.0, T}
                        : sample_times;
  fc.max_steps = max_steps;
  fc.initial_step = initial_step;
  return fc;
}

} // namespace

PYBIND11_MODULE(_effham, m) {
  m.doc() = "Entropy-penalized effective Hamiltonians and Mather measures "
            "on the torus: upwind discretization, Hessian Riemannian flow, "
            "regularized Newton solvers, closed-form pendulum references.";

  py::class_<TorusGrid>(m, "TorusGrid")
      .def_readonly("d", &TorusGrid::d)
      .def_readonly("n_per_dim", &TorusGrid::n_per_dim)
      .def_readonly("N", &TorusGrid::N)
      .def_readonly("h", &TorusGrid::h)
      .def_readonly("points", &TorusGrid::points)
      .def("__repr__", [](const TorusGrid& g) {
        return "TorusGrid(d=" + std::to_string(g.d) +
               ", n_per_dim=" + std::to_string(g.n_per_dim) + ")";
      });
  m.def("make_grid", &make_grid, py::arg("d"), py::arg("n_per_dim"),
        "Uniform periodic grid on [0,1)^d with n_per_dim nodes per axis.");

  py::class_<HamiltonianSpec>(m, "HamiltonianSpec")
      .def(py::init(&make_spec), py::arg("preset"), py::arg("P"))
      .def_property_readonly(
          "preset",
          [](const HamiltonianSpec& s) { return preset_name(s.preset); })
      .def_readonly("P", &HamiltonianSpec::P);
  m.def("preset_dimension",
        [](const std::string& name) {
          return preset_dimension(preset_from_name(name));
        },
        py::arg("preset"));
  m.def("preset_names", [] {
    return std::vector<std::string>{"minus_sin", "two_cos", "sin_sin",
                                    "strong_mix"};
  });

  py::class_<DiscreteState>(m, "DiscreteState")
      .def(py::init([](const Eigen::VectorXd& M, const Eigen::VectorXd& U) {
             return DiscreteState{M, U};
           }),
           py::arg("M"), py::arg("U"))
      .def_readwrite("M", &DiscreteState::M)
      .def_readwrite("U", &DiscreteState::U);
  m.def("default_initial", &default_initial, py::arg("grid"),
        "Mean-one cosine density bump and zero-mean value profile.");

  m.def("potential_on_grid",
        [](const HamiltonianSpec& spec, const TorusGrid& grid) {
          return potential_on_grid(spec, grid);
        },
        py::arg("spec"), py::arg("grid"));
  m.def("discrete_hamiltonian",
        [](const HamiltonianSpec& spec, const TorusGrid& grid,
           const Eigen::VectorXd& U) {
          return discrete_hamiltonian(spec, grid, U);
        },
        py::arg("spec"), py::arg("grid"), py::arg("U"),
        "Upwind discretization G_i(U) of |P + Du|^2/2 + V.");
  m.def("effective_H_estimate",
        [](const HamiltonianSpec& spec, const TorusGrid& grid,
           const DiscreteState& state, double k) {
          return effective_H_estimate(spec, grid, state, PenalizedParams{k});
        },
        py::arg("spec"), py::arg("grid"), py::arg("state"), py::arg("k"),
        "H-tilde^k: density-weighted energy minus rescaled entropy.");
  m.def("F_tilde",
        [](const HamiltonianSpec& spec, const TorusGrid& grid,
           const DiscreteState& state, double k) {
          return F_tilde(spec, grid, state, PenalizedParams{k});
        },
        py::arg("spec"), py::arg("grid"), py::arg("state"), py::arg("k"),
        "Monotone stationarity map, stacked (density block, value block).");
  m.def("F_bar",
        [](const HamiltonianSpec& spec, const TorusGrid& grid,
           const DiscreteState& state, double k) {
          return F_bar(spec, grid, state, PenalizedParams{k});
        },
        py::arg("spec"), py::arg("grid"), py::arg("state"), py::arg("k"),
        "Hessian-preconditioned map driving the flow and the Newton solver.");

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("times", &Trajectory::times)
      .def_readonly("states", &Trajectory::states)
      .def_readonly("hbar_series", &Trajectory::hbar_series)
      .def_readonly("mass_series", &Trajectory::mass_series)
      .def_readonly("min_density_series", &Trajectory::min_density_series)
      .def_readonly("lyapunov_series", &Trajectory::lyapunov_series)
      .def_readonly("n_steps", &Trajectory::n_steps)
      .def_readonly("n_rhs_evals", &Trajectory::n_rhs_evals)
      .def_readonly("stopped_early", &Trajectory::stopped_early)
      .def_readonly("stop_time", &Trajectory::stop_time);
  m.def("integrate_hrf",
        [](const DiscreteState& initial, const HamiltonianSpec& spec,
           const TorusGrid& grid, double k, double T, double rel_tol,
           double abs_tol, const std::vector<double>& sample_times,
           long long max_steps, double initial_step) {
          return integrate_hrf(initial, spec, grid, PenalizedParams{k},
                               make_flow_config(T, rel_tol, abs_tol,
                                                sample_times, max_steps,
                                                initial_step));
        },
        py::arg("initial"), py::arg("spec"), py::arg("grid"), py::arg("k"),
        py::arg("T") = 40.0, py::arg("rel_tol") = 1e-10,
        py::arg("abs_tol") = 1e-12,
        py::arg("sample_times") = std::vector<double>{},
        py::arg("max_steps") = 400'000'000LL,
        py::arg("initial_step") = 1e-3,
        "Hessian Riemannian flow in log-density coordinates, adaptive "
        "Dormand-Prince 5(4).  Samples default to {0, T}.");

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("state", &SolveResult::state)
      .def_readonly("residual_history", &SolveResult::residual_history)
      .def_readonly("mass_history", &SolveResult::mass_history)
      .def_readonly("min_density_history", &SolveResult::min_density_history)
      .def_readonly("iterations", &SolveResult::iterations)
      .def_readonly("converged", &SolveResult::converged);
  m.def("newton_solve",
        [](const DiscreteState& initial, const HamiltonianSpec& spec,
           const TorusGrid& grid, double k, double tau, double kappa,
           double residual_tol, int max_iters) {
          NewtonConfig cfg;
          cfg.tau = tau;
          cfg.kappa = kappa;
          cfg.residual_tol = residual_tol;
          cfg.max_iters = max_iters;
          return newton_solve(initial, spec, grid, PenalizedParams{k}, cfg);
        },
        py::arg("initial"), py::arg("spec"), py::arg("grid"), py::arg("k"),
        py::arg("tau") = 1.0, py::arg("kappa") = 1.0,
        py::arg("residual_tol") = 1e-9, py::arg("max_iters") = 500,
        "Regularized Newton iteration x -> x - (tau I + kappa J)^-1 F.");

  py::class_<ReducedRootResult>(m, "ReducedRootResult")
      .def_readonly("state", &ReducedRootResult::state)
      .def_readonly("W", &ReducedRootResult::W)
      .def_readonly("hbar", &ReducedRootResult::hbar)
      .def_readonly("residual", &ReducedRootResult::residual)
      .def_readonly("iterations", &ReducedRootResult::iterations);
  m.def("reduced_newton_solve",
        [](const Eigen::VectorXd& U0, const HamiltonianSpec& spec,
           const TorusGrid& grid, double k) {
          return reduced_newton_solve(U0, spec, grid, PenalizedParams{k});
        },
        py::arg("U0"), py::arg("spec"), py::arg("grid"), py::arg("k"),
        "Value-only root finder with the density eliminated in closed "
        "form; robust for strongly concentrated solutions.");

  m.def("lyapunov", &lyapunov, py::arg("state"), py::arg("root"),
        "Relative entropy of the density plus half the squared value gap.");

  m.attr("pendulum_P0") = pendulum_P0;
  m.def("hbar_pendulum", &hbar_pendulum, py::arg("P"),
        "Effective Hamiltonian of p^2/2 - sin(2 pi x).");
  m.def("hbar_separable_2d", &hbar_separable_2d, py::arg("P1"),
        py::arg("P2"));
  m.def("corrector_pendulum", &corrector_pendulum, py::arg("P"),
        py::arg("grid"),
        "Zero-mean corrector of the pendulum cell problem on grid nodes.");
  m.def("adaptive_quadrature",
        [](const std::function<double(double)>& f, double a, double b,
           double tol) { return adaptive_quadrature(f, a, b, tol); },
        py::arg("f"), py::arg("a"), py::arg("b"), py::arg("tol") = 1e-10);
}

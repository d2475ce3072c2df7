#include <doctest.h>

#include <cmath>

#include "effham/analytic.hpp"
#include "effham/grid.hpp"

using namespace effham;

TEST_CASE("adaptive quadrature on closed forms") {
  CHECK(adaptive_quadrature([](double s) { return std::sin(M_PI * s); }, 0, 1,
                            1e-12) == doctest::Approx(2 / M_PI).epsilon(1e-11));
  CHECK(adaptive_quadrature([](double s) { return s * s; }, -1, 2, 1e-12) ==
        doctest::Approx(3.0).epsilon(1e-11));
  // the edge of the flat part: integral of the separatrix speed
  const double P0 = adaptive_quadrature(
      [](double s) { return std::sqrt(2 * (std::sin(2 * M_PI * s) + 1)); }, 0,
      1, 1e-11);
  CHECK(std::abs(P0 - 4 / M_PI) <= 1e-9);
  CHECK(std::abs(pendulum_P0 - 4 / M_PI) <= 1e-15);
}

TEST_CASE("pendulum effective Hamiltonian on the flat part") {
  CHECK(hbar_pendulum(0.5) == 1.0); // exact, not approximate
  CHECK(hbar_pendulum(0.0) == 1.0);
  CHECK(hbar_pendulum(-1.2) == 1.0);
  CHECK(hbar_pendulum(pendulum_P0) == 1.0);
}

TEST_CASE("pendulum effective Hamiltonian beyond the flat part") {
  // frozen reference values for the level constant
  CHECK(corrector_constant(1.5) ==
        doctest::Approx(1.244637640628).epsilon(1e-9));
  CHECK(corrector_constant(2.0) ==
        doctest::Approx(2.063795422862).epsilon(1e-9));
  CHECK(corrector_constant(2.5) ==
        doctest::Approx(3.165327623284).epsilon(1e-9));
  CHECK(corrector_constant(1.35) ==
        doctest::Approx(1.067536034158).epsilon(1e-9));
  CHECK(hbar_pendulum(1.5) == doctest::Approx(1.244637640628).epsilon(1e-9));
  CHECK_THROWS(corrector_constant(0.5));

  // evenness, continuity at the edge, strict growth beyond it
  CHECK(hbar_pendulum(-1.7) == hbar_pendulum(1.7));
  CHECK(std::abs(hbar_pendulum(pendulum_P0 + 1e-6) - 1.0) <= 1e-4);
  double prev = hbar_pendulum(pendulum_P0);
  for (int i = 1; i <= 40; ++i) {
    const double P = pendulum_P0 + 0.05 * i;
    const double cur = hbar_pendulum(P);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("separable 2D reference") {
  CHECK(hbar_separable_2d(1.5, 2.5) ==
        doctest::Approx(4.4099652639).epsilon(1e-9));
  CHECK(hbar_separable_2d(0.3, -0.8) == 2.0); // both momenta flat
  CHECK(hbar_separable_2d(1.5, 0.2) ==
        doctest::Approx(hbar_pendulum(1.5) + 1.0).epsilon(1e-12));
}

TEST_CASE("corrector gradient solves the cell problem pointwise") {
  const TorusGrid g = make_grid(1, 64);
  for (double P : {1.4, 2.0, -1.8}) {
    const Eigen::VectorXd du = corrector_gradient_pendulum(P, g);
    const double c = corrector_constant(std::abs(P));
    for (int i = 0; i < g.N; ++i) {
      const double x = g.points(i, 0);
      const double resid =
          0.5 * (P + du(i)) * (P + du(i)) - std::sin(2 * M_PI * x) - c;
      CHECK(std::abs(resid) <= 1e-9);
    }
  }
  // odd in P
  const Eigen::VectorXd plus = corrector_gradient_pendulum(1.6, g);
  const Eigen::VectorXd minus = corrector_gradient_pendulum(-1.6, g);
  CHECK((plus + minus).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("corrector is periodic and mean-free") {
  const TorusGrid g = make_grid(1, 60);
  for (double P : {1.5, -2.2}) {
    const Eigen::VectorXd u = corrector_pendulum(P, g);
    CHECK(std::abs(u.mean()) <= 1e-12);
    // the accumulated gradient closes up over the period: the jump from
    // the last node back to the first matches a single cell
    const double wrap_gap =
        u(0) - u(g.N - 1) -
        (adaptive_quadrature(
             [&](double s) {
               const double c = corrector_constant(std::abs(P));
               const double arg = c + std::sin(2 * M_PI * s);
               return (P >= 0 ? 1.0 : -1.0) *
                          std::sqrt(2 * std::max(arg, 0.0)) -
                      P;
             },
             0.0, g.h, 1e-11));
    CHECK(std::abs(wrap_gap) <= 1e-8);
  }
}

#ifndef EFFHAM_ANALYTIC_HPP
#define EFFHAM_ANALYTIC_HPP

#include <Eigen/Dense>
#include <functional>

#include "effham/grid.hpp"

namespace effham {

// P0 = integral_0^1 sqrt(2(sin 2*pi*s + 1)) ds = 4/pi, the edge of the
// flat part of the pendulum effective Hamiltonian.
inline constexpr double pendulum_P0 = 1.2732395447351628; // 4/pi

// Adaptive Simpson estimate of integral_a^b f with |error| <= tol.
double adaptive_quadrature(const std::function<double(double)>& f, double a,
                           double b, double tol);

// Effective Hamiltonian of H(x,p) = p^2/2 - sin(2 pi x): equals 1 on
// |P| <= 4/pi, otherwise the unique c > 1 with
// |P| = integral_0^1 sqrt(2(sin 2*pi*s + c)) ds, found by bisection.
double hbar_pendulum(double P);

// Separable 2D reference for the two_cos preset:
// hbar_pendulum(P1) + hbar_pendulum(P2).
double hbar_separable_2d(double P1, double P2);

// C(P): the constant in the corrector gradient, equal to the c above for
// |P| > P0 and 1 at |P| = P0.  Rejects |P| < P0.
double corrector_constant(double P);

// u*_x(x) = sqrt(2 max{C(P) + sin(2 pi x), 0}) - P sampled on grid nodes;
// odd in P via u*_x(x; -P) = -u*_x(x; |P|).
Eigen::VectorXd corrector_gradient_pendulum(double P, const TorusGrid& grid);

// The corrector itself: cumulative quadrature of u*_x from 0 to each node,
// normalized to zero mean.
Eigen::VectorXd corrector_pendulum(double P, const TorusGrid& grid);

} // namespace effham

#endif

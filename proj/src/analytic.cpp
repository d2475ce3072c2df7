#include "effham/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace effham {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double simpson_estimate(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a,
                     double b, double fa, double fm, double fb, double whole,
                     double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson_estimate(f, a, m, fa, flm, fm);
  const double right = simpson_estimate(f, m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0)
    throw std::runtime_error("adaptive_quadrature: recursion depth exhausted");
  if (std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// integrand of the level-set length: sqrt(2(sin 2*pi*s + c))
double level_integral(double c) {
  auto f = [c](double s) {
    const double arg = 2.0 * (std::sin(two_pi * s) + c);
    return std::sqrt(std::max(arg, 0.0));
  };
  return adaptive_quadrature(f, 0.0, 1.0, 1e-11);
}

} // namespace

double adaptive_quadrature(const std::function<double(double)>& f, double a,
                           double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = simpson_estimate(f, a, b, fa, fm, fb);
  return adaptive_step(f, a, b, fa, fm, fb, whole, tol, 60);
}

double hbar_pendulum(double P) {
  const double a = std::abs(P);
  if (a <= pendulum_P0) return 1.0;
  // level_integral is strictly increasing in c; bracket [1, 1+P^2] since
  // the value at c=1 is 4/pi <= |P| and grows at least like sqrt(2c).
  double lo = 1.0, hi = 1.0 + a * a;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (level_integral(mid) < a ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double hbar_separable_2d(double P1, double P2) {
  return hbar_pendulum(P1) + hbar_pendulum(P2);
}

double corrector_constant(double P) {
  const double a = std::abs(P);
  if (a < pendulum_P0 - 1e-12)
    throw std::domain_error(
        "corrector_constant: |P| below the flat-region edge 4/pi");
  return a <= pendulum_P0 ? 1.0 : hbar_pendulum(a);
}

namespace {

double corrector_gradient_at(double x, double C, double absP) {
  const double arg = 2.0 * std::max(C + std::sin(two_pi * x), 0.0);
  return std::sqrt(arg) - absP;
}

} // namespace

Eigen::VectorXd corrector_gradient_pendulum(double P, const TorusGrid& grid) {
  if (grid.d != 1)
    throw std::invalid_argument("corrector_gradient_pendulum: 1D grids only");
  const double C = corrector_constant(P);
  const double sign = P < 0.0 ? -1.0 : 1.0;
  const double absP = std::abs(P);
  Eigen::VectorXd g(grid.N);
  for (int i = 0; i < grid.N; ++i)
    g(i) = sign * corrector_gradient_at(grid.points(i, 0), C, absP);
  return g;
}

Eigen::VectorXd corrector_pendulum(double P, const TorusGrid& grid) {
  if (grid.d != 1)
    throw std::invalid_argument("corrector_pendulum: 1D grids only");
  const double C = corrector_constant(P);
  const double sign = P < 0.0 ? -1.0 : 1.0;
  const double absP = std::abs(P);
  auto gx = [C, absP](double s) { return corrector_gradient_at(s, C, absP); };
  Eigen::VectorXd u(grid.N);
  double acc = 0.0, prev = 0.0;
  for (int i = 0; i < grid.N; ++i) {
    const double xi = grid.points(i, 0);
    acc += adaptive_quadrature(gx, prev, xi, 1e-12);
    u(i) = sign * acc;
    prev = xi;
  }
  u.array() -= u.mean();
  return u;
}

} // namespace effham

#pragma once

#include <memory>
#include <string>
#include <vector>

namespace csgs {

/// Radial quadrature grid on [0, R].  Nodes are r[0] = 0 < ... < r[n-1] = R,
/// uniform for stretch = 1 and geometrically graded for stretch > 1 (spacing
/// near R larger than near 0 by a factor of about `stretch`).
///
/// Planar integrals of radial functions use the measure 2*pi * f(r) * r dr;
/// `w` holds composite-trapezoid weights for int_0^R f(r) r dr, so that the
/// weights are nonnegative and sum exactly (telescoping) to R^2/2.  `c` holds
/// the plain line weights for int_0^R f(r) dr used by the cumulative moment
/// and tail integrals.
struct Grid {
  std::vector<double> r;  ///< nodes
  std::vector<double> w;  ///< weights for int f(r) r dr   (w[i] = c[i]*r[i])
  std::vector<double> c;  ///< weights for int f(r) dr     (trapezoid)
  double R = 0.0;
  int n = 0;
  double stretch = 1.0;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Build a grid.  Throws std::invalid_argument on non-finite or out-of-range
/// arguments (R > 0, n >= 2, stretch >= 1).
GridPtr make_grid(double R, int n, double stretch = 1.0);

/// Samples of a radial profile on a shared grid.
struct RadialFunction {
  GridPtr grid;
  std::vector<double> v;

  RadialFunction() = default;
  explicit RadialFunction(GridPtr g) : grid(std::move(g)), v(grid->n, 0.0) {}
  RadialFunction(GridPtr g, std::vector<double> vals)
      : grid(std::move(g)), v(std::move(vals)) {}

  double operator[](int i) const { return v[i]; }
  double& operator[](int i) { return v[i]; }
  int size() const { return grid ? grid->n : 0; }
};

/// Sample f(r) at the nodes.
template <class F>
RadialFunction make_function(const GridPtr& g, F&& f) {
  RadialFunction u(g);
  for (int i = 0; i < g->n; ++i) u.v[i] = f(g->r[i]);
  return u;
}

/// Throws std::invalid_argument if any value is not finite.
void check_finite(const RadialFunction& u, const char* what);

/// Throws std::invalid_argument unless both functions share the same grid
/// object (pointer identity).
void check_same_grid(const RadialFunction& a, const RadialFunction& b);

/// 2*pi * int_0^R f(r) r dr by the grid weights (compensated summation).
double integrate(const RadialFunction& f);

/// h(r_i) = int_0^{r_i} s u(s)^2 ds, cumulative trapezoid.  Nondecreasing,
/// h(0) = 0, and h(R) equals the planar mass ||u||_2^2 / (2*pi) exactly.
RadialFunction cumulative_moment(const RadialFunction& u);

/// T(r_i) = int_{r_i}^R f(s) ds, trapezoid accumulated from the right.
/// If the integrand has not decayed at R (|f(R)|*R > tail_tol) a warning is
/// printed to stderr; the value is still returned.
RadialFunction tail_integral(const RadialFunction& f, double tail_tol = 1e-10);

/// d/dr by second-order differences: one-sided at r = R, and u'(0) = 0
/// enforced by radial symmetry.
RadialFunction derivative(const RadialFunction& u);

/// Adjoint of `derivative` (transpose of its stencil matrix D), so that
/// sum_i z_i (D u)_i == sum_j u_j (D^T z)_j exactly.
RadialFunction derivative_adjoint(const RadialFunction& z);

/// d^2/dr^2 by second-order differences (symmetric extension at the origin).
RadialFunction second_derivative(const RadialFunction& u);

/// Radial Laplacian u'' + u'/r with the origin limit 2 u''(0).
RadialFunction laplacian(const RadialFunction& u);

/// sqrt( int (|grad u|^2 + u^2) dx ).
double h1_norm(const RadialFunction& u);

/// Metric of the natural workspace: ||u - v||_{H^1} + ||grad(u^2 - v^2)||_2.
double distance_X(const RadialFunction& u, const RadialFunction& v);

/// Small pointwise helpers (shared grid enforced).
RadialFunction add(const RadialFunction& a, const RadialFunction& b);
RadialFunction sub(const RadialFunction& a, const RadialFunction& b);
RadialFunction scaled(const RadialFunction& a, double s);

}  // namespace csgs

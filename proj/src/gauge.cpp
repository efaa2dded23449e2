#include "csgs/gauge.hpp"

#include <cmath>
#include <numbers>

#include "csgs/util.hpp"

namespace csgs {

static constexpr double two_pi = 2.0 * std::numbers::pi;

GaugeFields compute_gauge(const RadialFunction& u, double mu) {
  check_finite(u, "compute_gauge");
  const Grid& g = *u.grid;
  GaugeFields gf;
  gf.h = cumulative_moment(u);

  gf.V1 = RadialFunction(u.grid);
  gf.V1.v[0] = 0.0;  // h = O(r^2) at the origin, so h^2/r^2 -> 0
  for (int i = 1; i < g.n; ++i) {
    double hr = gf.h.v[i] / g.r[i];
    gf.V1.v[i] = hr * hr;
  }

  RadialFunction w(u.grid);
  w.v[0] = 0.0;
  for (int i = 1; i < g.n; ++i) {
    double u2 = u.v[i] * u.v[i];
    w.v[i] = (gf.h.v[i] / g.r[i]) * (2.0 + mu * u2) * u2;
  }
  gf.V2 = tail_integral(w);
  return gf;
}

double D_functional(const RadialFunction& u) {
  check_finite(u, "D_functional");
  const Grid& g = *u.grid;
  RadialFunction h = cumulative_moment(u);
  KahanAcc acc;
  for (int i = 1; i < g.n; ++i) {
    double hr = h.v[i] / g.r[i];
    acc.add(g.w[i] * u.v[i] * u.v[i] * hr * hr);
  }
  return two_pi * acc.sum;
}

double E_functional(const RadialFunction& u) {
  check_finite(u, "E_functional");
  const Grid& g = *u.grid;
  RadialFunction h = cumulative_moment(u);
  KahanAcc acc;
  for (int i = 1; i < g.n; ++i) {
    double u2 = u.v[i] * u.v[i];
    double hr = h.v[i] / g.r[i];
    acc.add(g.w[i] * u2 * u2 * hr * hr);
  }
  return two_pi * acc.sum;
}

// Shared core of the two first variations.  For the discrete functional
//   S = 2*pi sum_i w_i  dens_i(u) * (h_i/r_i)^2,
// the variation splits into the local density term and the h-variation;
// the latter is the adjoint of the cumulative trapezoid rule applied to
// a_i = w_i dens_i h_i / r_i^2:
//   (M^T a)_j = c_j * sum_{i>j} a_i + (j>0 ? 0.5*(r_j - r_{j-1}) a_j : 0).
// Using the exact adjoint keeps the Euler relations at round-off.
std::vector<double> cumtrap_adjoint(const Grid& g,
                                    const std::vector<double>& a) {
  const int n = g.n;
  std::vector<double> out(n, 0.0);
  double suffix = 0.0;
  for (int j = n - 1; j >= 0; --j) {
    out[j] = g.c[j] * suffix;
    if (j > 0) out[j] += 0.5 * (g.r[j] - g.r[j - 1]) * a[j];
    suffix += a[j];
  }
  return out;
}

double gateaux_D(const RadialFunction& u, const RadialFunction& phi) {
  check_same_grid(u, phi);
  check_finite(u, "gateaux_D");
  check_finite(phi, "gateaux_D");
  const Grid& g = *u.grid;
  RadialFunction h = cumulative_moment(u);
  std::vector<double> a(g.n, 0.0);
  for (int i = 1; i < g.n; ++i)
    a[i] = g.w[i] * u.v[i] * u.v[i] * h.v[i] / (g.r[i] * g.r[i]);
  std::vector<double> ta = cumtrap_adjoint(g, a);
  KahanAcc acc;
  for (int j = 1; j < g.n; ++j) {
    double hr = h.v[j] / g.r[j];
    acc.add((2.0 * g.w[j] * hr * hr * u.v[j] + 4.0 * g.r[j] * u.v[j] * ta[j]) *
            phi.v[j]);
  }
  return two_pi * acc.sum;
}

double gateaux_E(const RadialFunction& u, const RadialFunction& phi) {
  check_same_grid(u, phi);
  check_finite(u, "gateaux_E");
  check_finite(phi, "gateaux_E");
  const Grid& g = *u.grid;
  RadialFunction h = cumulative_moment(u);
  std::vector<double> b(g.n, 0.0);
  for (int i = 1; i < g.n; ++i) {
    double u2 = u.v[i] * u.v[i];
    b[i] = g.w[i] * u2 * u2 * h.v[i] / (g.r[i] * g.r[i]);
  }
  std::vector<double> tb = cumtrap_adjoint(g, b);
  KahanAcc acc;
  for (int j = 1; j < g.n; ++j) {
    double hr = h.v[j] / g.r[j];
    double u3 = u.v[j] * u.v[j] * u.v[j];
    acc.add((4.0 * g.w[j] * hr * hr * u3 + 4.0 * g.r[j] * u.v[j] * tb[j]) *
            phi.v[j]);
  }
  return two_pi * acc.sum;
}

}  // namespace csgs

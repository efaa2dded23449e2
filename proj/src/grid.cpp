#include "csgs/grid.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>

#include "csgs/util.hpp"

namespace csgs {

static constexpr double two_pi = 2.0 * std::numbers::pi;

GridPtr make_grid(double R, int n, double stretch) {
  if (!std::isfinite(R) || !std::isfinite(stretch))
    throw std::invalid_argument("make_grid: non-finite argument");
  if (R <= 0.0) throw std::invalid_argument("make_grid: R must be positive");
  if (n < 2) throw std::invalid_argument("make_grid: need at least 2 nodes");
  if (stretch < 1.0)
    throw std::invalid_argument("make_grid: stretch must be >= 1");

  auto g = std::make_shared<Grid>();
  g->R = R;
  g->n = n;
  g->stretch = stretch;
  g->r.resize(n);

  if (stretch == 1.0) {
    for (int i = 0; i < n; ++i) g->r[i] = R * double(i) / double(n - 1);
  } else {
    // r(x) = R (s^x - 1)/(s - 1): spacing grows geometrically, the last cell
    // is wider than the first by a factor s^{(n-2)/(n-1)} ~= stretch.
    const double ls = std::log(stretch);
    const double den = std::expm1(ls);
    for (int i = 0; i < n; ++i) {
      double x = double(i) / double(n - 1);
      g->r[i] = R * std::expm1(x * ls) / den;
    }
  }
  g->r[0] = 0.0;
  g->r[n - 1] = R;

  g->c.resize(n);
  g->w.resize(n);
  g->c[0] = 0.5 * (g->r[1] - g->r[0]);
  g->c[n - 1] = 0.5 * (g->r[n - 1] - g->r[n - 2]);
  for (int i = 1; i < n - 1; ++i) g->c[i] = 0.5 * (g->r[i + 1] - g->r[i - 1]);
  for (int i = 0; i < n; ++i) g->w[i] = g->c[i] * g->r[i];
  return g;
}

void check_finite(const RadialFunction& u, const char* what) {
  if (!u.grid) throw std::invalid_argument(std::string(what) + ": no grid");
  if (int(u.v.size()) != u.grid->n)
    throw std::invalid_argument(std::string(what) + ": size mismatch");
  for (double x : u.v)
    if (!std::isfinite(x))
      throw std::invalid_argument(std::string(what) + ": non-finite value");
}

void check_same_grid(const RadialFunction& a, const RadialFunction& b) {
  if (a.grid != b.grid)
    throw std::invalid_argument("radial functions live on different grids");
}

double integrate(const RadialFunction& f) {
  check_finite(f, "integrate");
  const Grid& g = *f.grid;
  KahanAcc acc;
  for (int i = 0; i < g.n; ++i) acc.add(g.w[i] * f.v[i]);
  return two_pi * acc.sum;
}

RadialFunction cumulative_moment(const RadialFunction& u) {
  check_finite(u, "cumulative_moment");
  const Grid& g = *u.grid;
  RadialFunction h(u.grid);
  double prev = 0.0;  // integrand s u(s)^2 at the previous node
  double acc = 0.0;
  h.v[0] = 0.0;
  for (int i = 1; i < g.n; ++i) {
    double cur = g.r[i] * u.v[i] * u.v[i];
    acc += 0.5 * (prev + cur) * (g.r[i] - g.r[i - 1]);
    h.v[i] = acc;
    prev = cur;
  }
  return h;
}

RadialFunction tail_integral(const RadialFunction& f, double tail_tol) {
  check_finite(f, "tail_integral");
  const Grid& g = *f.grid;
  if (std::abs(f.v[g.n - 1]) * g.R > tail_tol)
    std::cerr << "tail_integral: integrand not decayed at R (|f(R)|*R = "
              << std::abs(f.v[g.n - 1]) * g.R << ")\n";
  RadialFunction T(f.grid);
  T.v[g.n - 1] = 0.0;
  for (int i = g.n - 2; i >= 0; --i)
    T.v[i] = T.v[i + 1] +
             0.5 * (f.v[i] + f.v[i + 1]) * (g.r[i + 1] - g.r[i]);
  return T;
}

RadialFunction derivative(const RadialFunction& u) {
  check_finite(u, "derivative");
  const Grid& g = *u.grid;
  const int n = g.n;
  RadialFunction d(u.grid);
  d.v[0] = 0.0;  // radial symmetry
  for (int i = 1; i < n - 1; ++i) {
    double hm = g.r[i] - g.r[i - 1];
    double hp = g.r[i + 1] - g.r[i];
    d.v[i] = (hm * hm * u.v[i + 1] - hp * hp * u.v[i - 1] +
              (hp * hp - hm * hm) * u.v[i]) /
             (hm * hp * (hm + hp));
  }
  {  // one-sided second order at R
    double h1 = g.r[n - 2] - g.r[n - 3];
    double h2 = g.r[n - 1] - g.r[n - 2];
    d.v[n - 1] = u.v[n - 3] * h2 / (h1 * (h1 + h2)) -
                 u.v[n - 2] * (h1 + h2) / (h1 * h2) +
                 u.v[n - 1] * (h1 + 2.0 * h2) / (h2 * (h1 + h2));
  }
  return d;
}

RadialFunction derivative_adjoint(const RadialFunction& z) {
  check_finite(z, "derivative_adjoint");
  const Grid& g = *z.grid;
  const int n = g.n;
  RadialFunction out(z.grid);
  for (int i = 1; i < n - 1; ++i) {
    double hm = g.r[i] - g.r[i - 1];
    double hp = g.r[i + 1] - g.r[i];
    double den = hm * hp * (hm + hp);
    out.v[i - 1] -= z.v[i] * hp * hp / den;
    out.v[i] += z.v[i] * (hp * hp - hm * hm) / den;
    out.v[i + 1] += z.v[i] * hm * hm / den;
  }
  {
    double h1 = g.r[n - 2] - g.r[n - 3];
    double h2 = g.r[n - 1] - g.r[n - 2];
    out.v[n - 3] += z.v[n - 1] * h2 / (h1 * (h1 + h2));
    out.v[n - 2] -= z.v[n - 1] * (h1 + h2) / (h1 * h2);
    out.v[n - 1] += z.v[n - 1] * (h1 + 2.0 * h2) / (h2 * (h1 + h2));
  }
  return out;
}

RadialFunction second_derivative(const RadialFunction& u) {
  check_finite(u, "second_derivative");
  const Grid& g = *u.grid;
  const int n = g.n;
  RadialFunction d2(u.grid);
  {  // symmetric extension through the origin
    double h0 = g.r[1] - g.r[0];
    d2.v[0] = 2.0 * (u.v[1] - u.v[0]) / (h0 * h0);
  }
  for (int i = 1; i < n - 1; ++i) {
    double hm = g.r[i] - g.r[i - 1];
    double hp = g.r[i + 1] - g.r[i];
    d2.v[i] = 2.0 *
              ((u.v[i + 1] - u.v[i]) / hp - (u.v[i] - u.v[i - 1]) / hm) /
              (hm + hp);
  }
  {  // second divided difference over the last three nodes
    double a = g.r[n - 3], b = g.r[n - 2], c = g.r[n - 1];
    d2.v[n - 1] = 2.0 * (u.v[n - 3] / ((a - b) * (a - c)) +
                         u.v[n - 2] / ((b - a) * (b - c)) +
                         u.v[n - 1] / ((c - a) * (c - b)));
  }
  return d2;
}

RadialFunction laplacian(const RadialFunction& u) {
  RadialFunction d1 = derivative(u);
  RadialFunction d2 = second_derivative(u);
  const Grid& g = *u.grid;
  RadialFunction lap(u.grid);
  lap.v[0] = 2.0 * d2.v[0];
  for (int i = 1; i < g.n; ++i) lap.v[i] = d2.v[i] + d1.v[i] / g.r[i];
  return lap;
}

double h1_norm(const RadialFunction& u) {
  RadialFunction du = derivative(u);
  const Grid& g = *u.grid;
  KahanAcc acc;
  for (int i = 0; i < g.n; ++i)
    acc.add(g.w[i] * (du.v[i] * du.v[i] + u.v[i] * u.v[i]));
  return std::sqrt(two_pi * acc.sum);
}

double distance_X(const RadialFunction& u, const RadialFunction& v) {
  check_same_grid(u, v);
  check_finite(u, "distance_X");
  check_finite(v, "distance_X");
  const Grid& g = *u.grid;
  RadialFunction diff(u.grid), u2(u.grid), v2(u.grid);
  for (int i = 0; i < g.n; ++i) {
    diff.v[i] = u.v[i] - v.v[i];
    u2.v[i] = u.v[i] * u.v[i];
    v2.v[i] = v.v[i] * v.v[i];
  }
  RadialFunction du2 = derivative(u2), dv2 = derivative(v2);
  KahanAcc acc;
  for (int i = 0; i < g.n; ++i) {
    double d = du2.v[i] - dv2.v[i];
    acc.add(g.w[i] * d * d);
  }
  return h1_norm(diff) + std::sqrt(two_pi * acc.sum);
}

RadialFunction add(const RadialFunction& a, const RadialFunction& b) {
  check_same_grid(a, b);
  RadialFunction out(a.grid);
  for (int i = 0; i < a.size(); ++i) out.v[i] = a.v[i] + b.v[i];
  return out;
}

RadialFunction sub(const RadialFunction& a, const RadialFunction& b) {
  check_same_grid(a, b);
  RadialFunction out(a.grid);
  for (int i = 0; i < a.size(); ++i) out.v[i] = a.v[i] - b.v[i];
  return out;
}

RadialFunction scaled(const RadialFunction& a, double s) {
  RadialFunction out(a.grid);
  for (int i = 0; i < a.size(); ++i) out.v[i] = s * a.v[i];
  return out;
}

}  // namespace csgs

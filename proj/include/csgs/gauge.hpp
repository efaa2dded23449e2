#pragma once

#include <vector>

#include "csgs/grid.hpp"

namespace csgs {

/// Gauge profiles induced by a radial density u^2:
///   h(s)  = int_0^s r u(r)^2 dr
///   V1(r) = h(r)^2 / r^2            (limit 0 at the origin, O(r^2) there)
///   V2(r) = int_r^inf (h(s)/s) (2 + mu u(s)^2) u(s)^2 ds
/// All three live on the grid of u; the upper limit is truncated at R.
struct GaugeFields {
  RadialFunction h;
  RadialFunction V1;
  RadialFunction V2;
};

GaugeFields compute_gauge(const RadialFunction& u, double mu);

/// D(u) = int (u^2/|x|^2) h^2 dx,  E(u) = int (u^4/|x|^2) h^2 dx.
double D_functional(const RadialFunction& u);
double E_functional(const RadialFunction& u);

/// First variations of D and E along phi.  These are the exact derivatives of
/// the discrete functionals (the variation of h inside the square is applied
/// through the adjoint of the cumulative trapezoid rule), so the Euler
/// relations gateaux_D(u,u) = 6 D(u) and gateaux_E(u,u) = 8 E(u) hold to
/// round-off.
double gateaux_D(const RadialFunction& u, const RadialFunction& phi);
double gateaux_E(const RadialFunction& u, const RadialFunction& phi);

/// Adjoint of the cumulative trapezoid rule behind `cumulative_moment`:
/// for sensitivities a_i against h_i, the sensitivity against the moment
/// integrand sample j is
///   out_j = c_j sum_{i>j} a_i + (j>0 ? 0.5 (r_j - r_{j-1}) a_j : 0).
std::vector<double> cumtrap_adjoint(const Grid& g,
                                    const std::vector<double>& a);

}  // namespace csgs

#include "csgs/energy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "csgs/fibration.hpp"
#include "csgs/util.hpp"

namespace csgs {

static constexpr double two_pi = 2.0 * std::numbers::pi;

void Params::validate() const {
  auto bad = [](const char* msg) { throw std::invalid_argument(msg); };
  if (!std::isfinite(omega) || !std::isfinite(mu) || !std::isfinite(q) ||
      !std::isfinite(lambda) || !std::isfinite(p))
    bad("params: non-finite value");
  if (omega <= 0.0) bad("params: omega must be positive");
  if (lambda <= 0.0) bad("params: lambda must be positive");
  if (p <= 1.0) bad("params: p must exceed 1");
  if (oracle_limit) {
    if (mu < 0.0 || q < 0.0) bad("params: mu, q must be nonnegative");
  } else {
    if (mu <= 0.0) bad("params: mu must be positive (oracle mode allows 0)");
    if (q <= 0.0) bad("params: q must be positive (oracle mode allows 0)");
  }
}

double coupling_from_physical(double e, double kappa) {
  if (!std::isfinite(e) || !std::isfinite(kappa) || kappa == 0.0)
    throw std::invalid_argument("coupling: kappa must be finite and nonzero");
  double e2 = e * e;
  return (e2 * e2) / (kappa * kappa);
}

double abs_pow(double u, double p) {
  if (u == 0.0) return 0.0;
  return std::exp(p * std::log(std::abs(u)));
}

double signed_pow(double u, double p) {
  if (u == 0.0) return 0.0;
  double m = std::exp(p * std::log(std::abs(u)));
  return u > 0.0 ? m : -m;
}

FunctionalBreakdown breakdown(const RadialFunction& u, const Params& prm) {
  prm.validate();
  check_finite(u, "breakdown");
  const Grid& g = *u.grid;
  RadialFunction du = derivative(u);
  // Only h enters the six blocks (through h^2/r^2); V2 is not needed here,
  // so skip the tail integral that compute_gauge would also do.
  RadialFunction h = cumulative_moment(u);

  KahanAcc a, b, c, d, e, f;
  for (int i = 0; i < g.n; ++i) {
    double u2 = u.v[i] * u.v[i];
    double du2 = du.v[i] * du.v[i];
    double v1 = 0.0;
    if (i > 0) {
      double hr = h.v[i] / g.r[i];
      v1 = hr * hr;
    }
    a.add(g.w[i] * du2);
    b.add(g.w[i] * u2);
    c.add(g.w[i] * u2 * du2);
    d.add(g.w[i] * u2 * v1);
    e.add(g.w[i] * u2 * u2 * v1);
    f.add(g.w[i] * abs_pow(u.v[i], prm.p + 1.0));
  }

  FunctionalBreakdown bd;
  bd.A = two_pi * a.sum;
  bd.B = two_pi * b.sum;
  bd.C = two_pi * c.sum;
  bd.D = two_pi * d.sum;
  bd.E = two_pi * e.sum;
  bd.F = two_pi * f.sum;
  bd.I = 0.5 * (bd.A + prm.omega * bd.B) + prm.mu * bd.C + 0.5 * prm.q * bd.D +
         0.25 * prm.q * prm.mu * bd.E - prm.lambda * bd.F / (prm.p + 1.0);
  bd.N = bd.A + prm.omega * bd.B + 4.0 * prm.mu * bd.C +
         prm.q * (3.0 * bd.D + 2.0 * prm.mu * bd.E) - prm.lambda * bd.F;
  bd.P = prm.omega * bd.B - 2.0 * prm.lambda * bd.F / (prm.p + 1.0) +
         prm.q * (2.0 * bd.D + prm.mu * bd.E);
  return bd;
}

double action(const RadialFunction& u, const Params& prm) {
  return breakdown(u, prm).I;
}

double gateaux(const RadialFunction& u, const RadialFunction& phi,
               const Params& prm) {
  prm.validate();
  check_same_grid(u, phi);
  check_finite(u, "gateaux");
  check_finite(phi, "gateaux");
  const Grid& g = *u.grid;
  RadialFunction du = derivative(u);
  RadialFunction dphi = derivative(phi);
  GaugeFields gf = compute_gauge(u, prm.mu);

  KahanAcc acc;
  for (int i = 0; i < g.n; ++i) {
    double u2 = u.v[i] * u.v[i];
    double t = (1.0 + 2.0 * prm.mu * u2) * du.v[i] * dphi.v[i];
    t += 2.0 * prm.mu * u.v[i] * du.v[i] * du.v[i] * phi.v[i];
    t += prm.omega * u.v[i] * phi.v[i];
    t -= prm.lambda * signed_pow(u.v[i], prm.p) * phi.v[i];
    t += prm.q * gf.V1.v[i] * (1.0 + prm.mu * u2) * u.v[i] * phi.v[i];
    t += prm.q * gf.V2.v[i] * u.v[i] * phi.v[i];
    acc.add(g.w[i] * t);
  }
  return two_pi * acc.sum;
}

double gamma_direct(const FunctionalBreakdown& bd, const Params& prm,
                    double alpha) {
  double K = (prm.p + 1.0) * alpha - 2.0;
  return alpha * bd.A + (alpha - 1.0) * prm.omega * bd.B +
         4.0 * alpha * prm.mu * bd.C + (3.0 * alpha - 2.0) * prm.q * bd.D +
         (2.0 * alpha - 1.0) * prm.q * prm.mu * bd.E -
         K * prm.lambda * bd.F / (prm.p + 1.0);
}

double gamma_np(const FunctionalBreakdown& bd, double alpha) {
  return alpha * bd.N - bd.P;
}

double gamma_scale(const FunctionalBreakdown& bd, const Params& prm,
                   double alpha) {
  double K = (prm.p + 1.0) * alpha - 2.0;
  return std::abs(alpha * bd.A) + std::abs((alpha - 1.0) * prm.omega * bd.B) +
         std::abs(4.0 * alpha * prm.mu * bd.C) +
         std::abs((3.0 * alpha - 2.0) * prm.q * bd.D) +
         std::abs((2.0 * alpha - 1.0) * prm.q * prm.mu * bd.E) +
         std::abs(K * prm.lambda * bd.F / (prm.p + 1.0));
}

double gamma_value(const RadialFunction& u, const Params& prm, double alpha) {
  require_admissible(prm.p, alpha);
  return gamma_direct(breakdown(u, prm), prm, alpha);
}

CoercivityCoeffs coercivity_coeffs(double p, double alpha) {
  CoercivityCoeffs co;
  co.K = (p + 1.0) * alpha - 2.0;
  co.cA = ((p - 1.0) * alpha - 2.0) / (2.0 * co.K);
  co.cB = (p - 1.0) * alpha / (2.0 * co.K);
  co.cC = ((p - 3.0) * alpha - 2.0) / co.K;
  co.cD = ((p - 5.0) * alpha + 2.0) / (2.0 * co.K);
  co.cE = ((p - 7.0) * alpha + 2.0) / (4.0 * co.K);
  return co;
}

}  // namespace csgs

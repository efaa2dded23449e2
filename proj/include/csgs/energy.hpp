#pragma once

#include "csgs/gauge.hpp"
#include "csgs/grid.hpp"

namespace csgs {

/// Model parameters.  omega: mass, mu: quasilinear strength, q: gauge
/// coupling, lambda: nonlinearity strength, p: nonlinearity exponent.
/// The physical coupling is q = e^4 / kappa^2.
struct Params {
  double omega = 1.0;
  double mu = 1.0;
  double q = 1.0;
  double lambda = 1.0;
  double p = 6.0;
  /// Semilinear reference limit: permits q = 0 and/or mu = 0.  Off by
  /// default; the production paths require strictly positive couplings.
  bool oracle_limit = false;

  void validate() const;  // throws std::invalid_argument

  static Params oracle(double omega, double lambda, double p) {
    Params prm;
    prm.omega = omega;
    prm.mu = 0.0;
    prm.q = 0.0;
    prm.lambda = lambda;
    prm.p = p;
    prm.oracle_limit = true;
    return prm;
  }
};

/// q = e^4 / kappa^2.  kappa must be nonzero and finite.
double coupling_from_physical(double e, double kappa);

/// sign(u) |u|^p with a fast path at zero (exp/log evaluation).
double signed_pow(double u, double p);
/// |u|^p with a fast path at zero.
double abs_pow(double u, double p);

/// The six integral building blocks and the three derived scalars:
///   A = ||grad u||_2^2                B = ||u||_2^2
///   C = int u^2 |grad u|^2            D = int (u^2/|x|^2) h^2
///   E = int (u^4/|x|^2) h^2           F = int |u|^{p+1}
///   I = (A + omega B)/2 + mu C + q D/2 + q mu E/4 - lambda F/(p+1)
///   N = A + omega B + 4 mu C + q (3 D + 2 mu E) - lambda F        (Nehari)
///   P = omega B - 2 lambda F/(p+1) + q (2 D + mu E)               (Pohozaev)
struct FunctionalBreakdown {
  double A = 0, B = 0, C = 0, D = 0, E = 0, F = 0;
  double I = 0, N = 0, P = 0;
};

FunctionalBreakdown breakdown(const RadialFunction& u, const Params& prm);

/// Action I alone (same quadrature as breakdown).
double action(const RadialFunction& u, const Params& prm);

/// Gateaux derivative I'(u)[phi]:
///   int { (1+2 mu u^2) grad u . grad phi + 2 mu u |grad u|^2 phi
///         + omega u phi - lambda |u|^{p-1} u phi
///         + q V1 (1 + mu u^2) u phi + q V2 u phi } dx
double gateaux(const RadialFunction& u, const RadialFunction& phi,
               const Params& prm);

/// Dilation derivative Gamma = alpha N - P, expanded in the six blocks:
///   Gamma = alpha A + (alpha-1) omega B + 4 alpha mu C + (3 alpha - 2) q D
///           + (2 alpha - 1) q mu E - ((p+1) alpha - 2) lambda F / (p+1)
double gamma_direct(const FunctionalBreakdown& bd, const Params& prm,
                    double alpha);
/// Same scalar through the Nehari/Pohozaev route.
double gamma_np(const FunctionalBreakdown& bd, double alpha);
/// Sum of absolute term magnitudes; the natural normalization for Gamma.
double gamma_scale(const FunctionalBreakdown& bd, const Params& prm,
                   double alpha);
/// Gamma of u (direct coefficients).  Requires an admissible alpha.
double gamma_value(const RadialFunction& u, const Params& prm, double alpha);

/// Coefficients of the coercivity identity
///   I - Gamma/K = cA A + cB omega B + cC mu C + cD q D + cE q mu E,
/// with K = (p+1) alpha - 2.  All five are positive for admissible alpha.
struct CoercivityCoeffs {
  double K, cA, cB, cC, cD, cE;
};
CoercivityCoeffs coercivity_coeffs(double p, double alpha);

}  // namespace csgs

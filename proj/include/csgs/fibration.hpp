#pragma once

#include <functional>

#include "csgs/energy.hpp"
#include "csgs/grid.hpp"

namespace csgs {

/// Dilation family u_t(x) = t^alpha u(t x).  Admissible exponents:
///   p >= 7      : alpha > 1
///   5 < p < 7   : 1 < alpha < 2/(7-p)
/// These make the fiber derivative strictly decreasing after the t^{8a-5}
/// factorization, so the fiber has a unique maximum.
bool admissible_alpha(double p, double alpha);

/// Midpoint of the admissible window: 2 for p >= 7, else (1 + 2/(7-p))/2.
double default_alpha(double p);
void require_admissible(double p, double alpha);  // throws

/// u_t on the same grid: values t^alpha * u(t r_i), monotone cubic resample,
/// zero beyond the original support.  t = 1 returns the identical samples.
RadialFunction scale(const RadialFunction& u, double t, double alpha);

/// I(u_t) from the scaling laws of the six blocks (no re-quadrature):
///   t^{2a} A/2 + t^{2a-2} omega B/2 + t^{4a} mu C
///   + t^{6a-4} q D/2 + t^{8a-4} q mu E/4 - t^{(p+1)a-2} lambda F/(p+1)
double path_value(const FunctionalBreakdown& bd, double t, const Params& prm,
                  double alpha);

/// g(t) = gamma'_u(t) / t^{8a-5}; strictly decreasing in t with a single
/// sign change, so Gamma(u_t) = t gamma'_u(t) has a unique root.
double g_value(const FunctionalBreakdown& bd, double t, const Params& prm,
               double alpha);

/// gamma'_u(t) = t^{8a-5} g(t).
double path_derivative(const FunctionalBreakdown& bd, double t,
                       const Params& prm, double alpha);

/// Root of g from a breakdown alone: the fiber-critical t in closed form
/// (doubling bracket from t = 1, geometric bisection to relative width
/// 1e-12).  Throws std::domain_error on a degenerate breakdown and
/// std::runtime_error when no bracket is found.
double fiber_root(const FunctionalBreakdown& bd, const Params& prm,
                  double alpha, int* iters = nullptr);

struct ProjectOptions {
  /// After the closed-form root, refine t against the re-quadratured Gamma of
  /// the resampled profile until |Gamma| <= refine_tol * (sum of |terms|).
  /// This is what makes projection idempotent at the discrete level.
  bool refine = true;
  double refine_tol = 3e-12;
  double zero_floor = 1e-12;  ///< reject ||u||_{H^1} below this

  /// Block evaluator used for the constraint; the default (empty) means the
  /// standard `breakdown`.  A caller minimizing a different discretization of
  /// the same blocks (the solver does) plugs its own evaluator here so the
  /// projection zeroes *its* Gamma.
  std::function<FunctionalBreakdown(const RadialFunction&, const Params&)>
      blocks;
};

struct Projection {
  double t = 1.0;                ///< located root of the fiber derivative
  RadialFunction u;              ///< u_t on the original grid
  FunctionalBreakdown bd;        ///< breakdown of the projected profile
  double gamma_residual = 0.0;   ///< |Gamma(u_t)| / gamma_scale
  int bisect_iters = 0;
  int refine_evals = 0;
};

/// Project u onto the constraint set M = { Gamma = 0 }: bracket the root of
/// g by doubling from t = 1 (at most 60 doublings each way), bisect to
/// relative width 1e-12, then optionally refine at the grid level.
/// Throws std::domain_error on (numerically) zero input and
/// std::runtime_error if no bracket is found.
Projection project_to_M(const RadialFunction& u, const Params& prm,
                        double alpha, const ProjectOptions& opt = {});

}  // namespace csgs

#include "csgs/fibration.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "csgs/interp.hpp"

namespace csgs {

bool admissible_alpha(double p, double alpha) {
  if (!std::isfinite(p) || !std::isfinite(alpha)) return false;
  if (alpha <= 1.0) return false;
  if (p >= 7.0) return true;
  if (p > 5.0) return alpha < 2.0 / (7.0 - p);
  return false;
}

double default_alpha(double p) {
  if (p >= 7.0) return 2.0;
  if (p > 5.0) return 0.5 * (1.0 + 2.0 / (7.0 - p));
  throw std::invalid_argument("default_alpha: requires p > 5");
}

void require_admissible(double p, double alpha) {
  if (!admissible_alpha(p, alpha))
    throw std::invalid_argument("alpha outside the admissible window");
}

RadialFunction scale(const RadialFunction& u, double t, double alpha) {
  check_finite(u, "scale");
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::invalid_argument("scale: t must be positive and finite");
  if (t == 1.0) return u;

  const Grid& g = *u.grid;
  double amp = std::exp(alpha * std::log(t));
  RadialFunction out;
  out.grid = u.grid;
  out.v.resize(g.n);
  MonotoneCubic spline(g.r, u.v);
  for (int i = 0; i < g.n; ++i) {
    double s = t * g.r[i];
    out.v[i] = s > g.R ? 0.0 : amp * spline(s);
  }
  // Profiles live on the truncated ball with the boundary pinned; keep the
  // dilated profile in the same space (for t < 1 the resample would
  // otherwise pull interior values onto the last node).
  out.v[g.n - 1] = 0.0;
  return out;
}

double path_value(const FunctionalBreakdown& bd, double t, const Params& prm,
                  double alpha) {
  if (!(t > 0.0)) throw std::domain_error("path_value: t must be positive");
  double K = (prm.p + 1.0) * alpha - 2.0;
  return 0.5 * std::pow(t, 2.0 * alpha) * bd.A +
         0.5 * prm.omega * std::pow(t, 2.0 * alpha - 2.0) * bd.B +
         prm.mu * std::pow(t, 4.0 * alpha) * bd.C +
         0.5 * prm.q * std::pow(t, 6.0 * alpha - 4.0) * bd.D +
         0.25 * prm.q * prm.mu * std::pow(t, 8.0 * alpha - 4.0) * bd.E -
         prm.lambda * std::pow(t, K) * bd.F / (prm.p + 1.0);
}

double g_value(const FunctionalBreakdown& bd, double t, const Params& prm,
               double alpha) {
  if (!(t > 0.0)) throw std::domain_error("g_value: t must be positive");
  double K = (prm.p + 1.0) * alpha - 2.0;
  return alpha * bd.A * std::pow(t, 4.0 - 6.0 * alpha) +
         (alpha - 1.0) * prm.omega * bd.B * std::pow(t, 2.0 - 6.0 * alpha) +
         4.0 * alpha * prm.mu * bd.C * std::pow(t, 4.0 - 4.0 * alpha) +
         (3.0 * alpha - 2.0) * prm.q * bd.D * std::pow(t, -2.0 * alpha) +
         (2.0 * alpha - 1.0) * prm.q * prm.mu * bd.E -
         K * prm.lambda * bd.F * std::pow(t, (prm.p - 7.0) * alpha + 2.0) /
             (prm.p + 1.0);
}

double path_derivative(const FunctionalBreakdown& bd, double t,
                       const Params& prm, double alpha) {
  return std::pow(t, 8.0 * alpha - 5.0) * g_value(bd, t, prm, alpha);
}

namespace {

struct FiberEval {
  double t = 1.0;
  RadialFunction u;
  FunctionalBreakdown bd;
  double gamma = 0.0;
  double scale = 1.0;
};

using BlocksFn =
    std::function<FunctionalBreakdown(const RadialFunction&, const Params&)>;

FiberEval eval_fiber(const RadialFunction& u, double t, const Params& prm,
                     double alpha, const BlocksFn& blocks) {
  FiberEval e;
  e.t = t;
  e.u = scale(u, t, alpha);
  e.bd = blocks ? blocks(e.u, prm) : breakdown(e.u, prm);
  e.gamma = gamma_direct(e.bd, prm, alpha);
  e.scale = gamma_scale(e.bd, prm, alpha);
  return e;
}

}  // namespace

double fiber_root(const FunctionalBreakdown& bd, const Params& prm,
                  double alpha, int* iters) {
  if (!(bd.A > 0.0) || !(bd.F > 0.0))
    throw std::domain_error("fiber_root: degenerate breakdown (A or F = 0)");
  if (iters) *iters = 0;

  // Bracket the root of the decreasing fiber slope g by doubling.
  double lo = 1.0, hi = 1.0;
  double g1 = g_value(bd, 1.0, prm, alpha);
  if (g1 == 0.0) return 1.0;
  if (g1 > 0.0) {
    for (int k = 0; k < 60 && g_value(bd, hi, prm, alpha) > 0.0; ++k)
      hi *= 2.0;
    if (g_value(bd, hi, prm, alpha) > 0.0)
      throw std::runtime_error("fiber_root: no sign change above t = 1");
    lo = hi / 2.0;
  } else {
    for (int k = 0; k < 60 && g_value(bd, lo, prm, alpha) < 0.0; ++k)
      lo /= 2.0;
    if (g_value(bd, lo, prm, alpha) < 0.0)
      throw std::runtime_error("fiber_root: no sign change below t = 1");
    hi = lo * 2.0;
  }
  int k = 0;
  for (; k < 200 && (hi - lo) > 1e-12 * lo; ++k) {
    double mid = std::sqrt(lo * hi);
    (g_value(bd, mid, prm, alpha) > 0.0 ? lo : hi) = mid;
  }
  if (iters) *iters = k;
  return 0.5 * (lo + hi);
}

Projection project_to_M(const RadialFunction& u, const Params& prm,
                        double alpha, const ProjectOptions& opt) {
  prm.validate();
  require_admissible(prm.p, alpha);
  check_finite(u, "project");
  if (h1_norm(u) < opt.zero_floor)
    throw std::domain_error("project: input is numerically zero");

  FunctionalBreakdown bd0 = opt.blocks ? opt.blocks(u, prm) : breakdown(u, prm);

  Projection pr;
  double t = fiber_root(bd0, prm, alpha, &pr.bisect_iters);

  FiberEval best = eval_fiber(u, t, prm, alpha, opt.blocks);
  ++pr.refine_evals;

  if (opt.refine && std::abs(best.gamma) > opt.refine_tol * best.scale) {
    // The resampled profile's own Gamma differs from the closed-form value
    // by the resampling defect; chase its root directly.  Gamma decreases
    // through the root, so the sign tells the search direction.
    FiberEval ea = best, eb = best;
    bool up = best.gamma > 0.0;
    bool bracketed = false;
    double w = 1e-6;
    for (int k = 0; k < 40 && w <= 0.5; ++k, w *= 4.0) {
      double tk = up ? t * (1.0 + w) : t * (1.0 - w);
      FiberEval ek = eval_fiber(u, tk, prm, alpha, opt.blocks);
      ++pr.refine_evals;
      if (std::abs(ek.gamma) < std::abs(best.gamma)) best = ek;
      if (up && ek.gamma < 0.0) {
        eb = ek;
        bracketed = true;
        break;
      }
      if (!up && ek.gamma > 0.0) {
        ea = ek;
        bracketed = true;
        break;
      }
      (up ? ea : eb) = ek;
    }
    if (bracketed) {
      for (int k = 0; k < 200; ++k) {
        if (std::abs(best.gamma) <= opt.refine_tol * best.scale) break;
        if (eb.t - ea.t <= 4.0 * std::numeric_limits<double>::epsilon() * eb.t)
          break;
        FiberEval em = eval_fiber(u, 0.5 * (ea.t + eb.t), prm, alpha, opt.blocks);
        ++pr.refine_evals;
        if (std::abs(em.gamma) < std::abs(best.gamma)) best = em;
        (em.gamma > 0.0 ? ea : eb) = em;
      }
    }
  }

  pr.t = best.t;
  pr.u = std::move(best.u);
  pr.bd = best.bd;
  pr.gamma_residual =
      best.scale > 0.0 ? std::abs(best.gamma) / best.scale : 0.0;
  return pr;
}

}  // namespace csgs

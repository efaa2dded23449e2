#include "csgs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "csgs/gauge.hpp"
#include "csgs/interp.hpp"
#include "csgs/util.hpp"

namespace csgs {

static constexpr double two_pi = 2.0 * std::numbers::pi;

namespace {

// The descent loop minimizes an interval (P1 finite-element) discretization
// of the action rather than the nodal-quadrature blocks: the centered first
// derivative behind the nodal A and C blocks annihilates node-to-node
// oscillation, so those blocks are not coercive as an *objective* (a
// checkerboard near the origin lowers them for free).  The interval
// stiffness sees every slope, which removes that spurious descent family.
// Reported quantities (sigma, constraint and equation residuals) still come
// from the standard blocks, evaluated on the converged profile.
FunctionalBreakdown fe_breakdown(const RadialFunction& u, const Params& prm) {
  prm.validate();
  check_finite(u, "fe_breakdown");
  const Grid& g = *u.grid;
  const int n = g.n;
  RadialFunction h = cumulative_moment(u);

  KahanAcc a, b, c, d, e, f;
  for (int k = 0; k + 1 < n; ++k) {
    double hk = g.r[k + 1] - g.r[k];
    double rm = 0.5 * (g.r[k] + g.r[k + 1]);
    double delta = (u.v[k + 1] - u.v[k]) / hk;
    double usq = 0.5 * (u.v[k] * u.v[k] + u.v[k + 1] * u.v[k + 1]);
    a.add(rm * hk * delta * delta);
    c.add(rm * hk * usq * delta * delta);
  }
  for (int i = 0; i < n; ++i) {
    double u2 = u.v[i] * u.v[i];
    double v1 = 0.0;
    if (i > 0) {
      double hr = h.v[i] / g.r[i];
      v1 = hr * hr;
    }
    b.add(g.w[i] * u2);
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

// Exact gradient of cA*A + cB*B + cC*C + cD*D + cE*E + cF*F in the interval
// discretization the descent loop minimizes (interval A and C, nodal
// B/D/E/F).  The moment chain goes through the adjoint of the actual
// cumulative trapezoid stencil, so S.w is the exact directional derivative
// of the discrete combination along w.
std::vector<double> combo_gradient(const RadialFunction& u, double p,
                                   double cA, double cB, double cC, double cD,
                                   double cE, double cF) {
  const Grid& g = *u.grid;
  const int n = g.n;
  RadialFunction h = cumulative_moment(u);

  std::vector<double> S(n, 0.0), y(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double ui = u.v[i], u2 = ui * ui;
    double w = two_pi * g.w[i];
    double V1 = 0.0;
    if (i > 0) {
      double hr = h.v[i] / g.r[i];
      V1 = hr * hr;
      y[i] = w * (h.v[i] / (g.r[i] * g.r[i])) * (2.0 * cD * u2 + 2.0 * cE * u2 * u2);
    }
    S[i] = w * (2.0 * cB * ui + cF * (p + 1.0) * signed_pow(ui, p) +
                V1 * ui * (2.0 * cD + 4.0 * cE * u2));
  }
  // Interval stiffness (cA*A) and quasilinear (cC*C) parts.
  for (int k = 0; k + 1 < n; ++k) {
    double hk = g.r[k + 1] - g.r[k];
    double rm = 0.5 * (g.r[k] + g.r[k + 1]);
    double delta = (u.v[k + 1] - u.v[k]) / hk;
    double usq = 0.5 * (u.v[k] * u.v[k] + u.v[k + 1] * u.v[k + 1]);
    double slope_sens =
        two_pi * rm * delta * (2.0 * cA + 2.0 * cC * usq);  // d/d(delta) chain
    S[k] -= slope_sens;
    S[k + 1] += slope_sens;
    double amp = cC * two_pi * rm * hk * delta * delta;  // d/d(usq) chain
    S[k] += amp * u.v[k];
    S[k + 1] += amp * u.v[k + 1];
  }
  std::vector<double> ta = cumtrap_adjoint(g, y);
  for (int j = 0; j < n; ++j) S[j] += 2.0 * g.r[j] * u.v[j] * ta[j];
  return S;
}

// Gradient of the action I = A/2 + omega B/2 + mu C + q D/2 + q mu E/4
// - lambda F/(p+1).
std::vector<double> weak_gradient(const RadialFunction& u, const Params& prm) {
  return combo_gradient(u, prm.p, 0.5, 0.5 * prm.omega, prm.mu, 0.5 * prm.q,
                        0.25 * prm.q * prm.mu, -prm.lambda / (prm.p + 1.0));
}

// Gradient of the constraint functional Gamma = alpha N - P, expanded into
// block coefficients.
std::vector<double> constraint_gradient(const RadialFunction& u,
                                        const Params& prm, double alpha) {
  double K = (prm.p + 1.0) * alpha - 2.0;
  return combo_gradient(u, prm.p, alpha, (alpha - 1.0) * prm.omega,
                        4.0 * alpha * prm.mu, (3.0 * alpha - 2.0) * prm.q,
                        (2.0 * alpha - 1.0) * prm.q * prm.mu,
                        -K * prm.lambda / (prm.p + 1.0));
}

// Finite-volume metric (variable-coefficient stiffness + omega mass) with a
// Dirichlet condition at R.  The stiffness coefficient 1 + 2 mu u^2 matches
// the leading quasilinear term of the operator, which keeps the
// preconditioned descent well scaled where the profile is large.
// Symmetric positive definite tridiagonal; Thomas solve.
struct Precond {
  std::vector<double> diag, off;

  Precond(const Grid& g, double omega, const RadialFunction& u, double mu) {
    const int n = g.n;
    diag.assign(n, 0.0);
    off.assign(n - 1, 0.0);
    for (int k = 0; k + 1 < n; ++k) {
      double ka = 1.0 + 2.0 * mu * u.v[k] * u.v[k];
      double kb = 1.0 + 2.0 * mu * u.v[k + 1] * u.v[k + 1];
      double coef = two_pi * 0.5 * (g.r[k] + g.r[k + 1]) * 0.5 * (ka + kb) /
                    (g.r[k + 1] - g.r[k]);
      off[k] = -coef;
      diag[k] += coef;
      diag[k + 1] += coef;
    }
    for (int i = 0; i < n; ++i) diag[i] += two_pi * omega * g.w[i];
    off[n - 2] = 0.0;
    diag[n - 1] = 1.0;
  }

  std::vector<double> solve(std::vector<double> rhs) const {
    const int n = int(diag.size());
    rhs[n - 1] = 0.0;
    std::vector<double> d(diag), x(n);
    for (int i = 1; i < n; ++i) {
      double m = off[i - 1] / d[i - 1];
      d[i] -= m * off[i - 1];
      rhs[i] -= m * rhs[i - 1];
    }
    x[n - 1] = rhs[n - 1] / d[n - 1];
    for (int i = n - 2; i >= 0; --i)
      x[i] = (rhs[i] - off[i] * x[i + 1]) / d[i];
    return x;
  }
};

// Fiber maximum of the action over the dilation path, in closed form from
// the breakdown alone.
double reduced_value(const FunctionalBreakdown& bd, const Params& prm,
                     double alpha) {
  return path_value(bd, fiber_root(bd, prm, alpha), prm, alpha);
}

// Renormalize the profile within the two-parameter scaling family
// (amplitude and dilation) until both variational identities vanish on the
// reporting discretization.  At the discrete level the constrained
// minimizer satisfies the identities only up to the discretization defect
// (the continuum argument that makes the constraint "natural" does not
// survive quadrature exactly), so the minimizer and the identity-exact
// point differ by a multiplier-sized offset.  This stage moves the profile
// that O(defect) distance, which leaves the equation residual unchanged at
// leading order; residuals are reported as measured afterwards.
//
// Quasi-Newton on (N, Gamma) over (amplitude, dilation): the Jacobian comes
// from the closed-form block scalings, exact in amplitude (the blocks are
// homogeneous in the nodal values) and accurate to the resampling defect in
// dilation, so the iteration contracts by that defect per step.
FunctionalBreakdown identity_normalize(RadialFunction& u, const Params& prm,
                                       double alpha) {
  const Grid& g = *u.grid;
  RadialFunction w = u;
  FunctionalBreakdown bd = breakdown(w, prm);
  RadialFunction best = w;
  FunctionalBreakdown best_bd = bd;
  auto score = [&](const FunctionalBreakdown& b) {
    return std::max(std::abs(b.N), std::abs(gamma_direct(b, prm, alpha))) /
           (b.A + prm.omega * b.B);
  };
  double best_score = score(bd);
  for (int it = 0; it < 12 && best_score > 1e-13; ++it) {
    double wB = prm.omega * bd.B;
    double muC = prm.mu * bd.C, qD = prm.q * bd.D, qmuE = prm.q * prm.mu * bd.E;
    double lF = prm.lambda * bd.F;
    double K = (prm.p + 1.0) * alpha - 2.0;
    // Derivatives of N and Gamma at (s, t) = (1, 1): block coefficient
    // times the block's scaling power.
    double Ns = 2.0 * (bd.A + wB) + 16.0 * muC + 18.0 * qD + 16.0 * qmuE -
                (prm.p + 1.0) * lF;
    double Gs = 2.0 * alpha * bd.A + 2.0 * (alpha - 1.0) * wB +
                16.0 * alpha * muC + (18.0 * alpha - 12.0) * qD +
                (16.0 * alpha - 8.0) * qmuE - K * lF;
    double Nt = 2.0 * alpha * bd.A + (2.0 * alpha - 2.0) * wB +
                16.0 * alpha * muC + (18.0 * alpha - 12.0) * qD +
                (16.0 * alpha - 8.0) * qmuE - K * lF;
    double Gt = 2.0 * alpha * alpha * bd.A +
                (2.0 * alpha - 2.0) * (alpha - 1.0) * wB +
                16.0 * alpha * alpha * muC +
                (6.0 * alpha - 4.0) * (3.0 * alpha - 2.0) * qD +
                (8.0 * alpha - 4.0) * (2.0 * alpha - 1.0) * qmuE -
                K * K * lF / (prm.p + 1.0);
    double det = Ns * Gt - Nt * Gs;
    if (!(std::abs(det) > 1e-300)) break;
    double Nval = bd.N;
    double Gval = gamma_direct(bd, prm, alpha);
    double ds = (-Nval * Gt + Nt * Gval) / det;
    double dt = (Nval * Gs - Ns * Gval) / det;
    if (!(std::abs(ds) < 0.25 && std::abs(dt) < 0.25)) break;
    RadialFunction cand = scale(w, 1.0 + dt, alpha);
    for (int i = 0; i < g.n; ++i) cand.v[i] *= 1.0 + ds;
    FunctionalBreakdown cand_bd = breakdown(cand, prm);
    w = std::move(cand);
    bd = cand_bd;
    double sc = score(bd);
    if (sc < best_score) {
      best = w;
      best_bd = bd;
      best_score = sc;
    }
  }
  // Refuse to normalize from a point the family cannot fix; the caller
  // keeps its iterate and reports residuals as measured.
  if (!(best_score <= 1e-9))
    throw std::runtime_error("identity normalization stalled");
  u = std::move(best);
  return best_bd;
}

}  // namespace

SolveResult minimize_on_M(const Params& prm, const SolveConfig& cfg) {
  SolveResult out;
  prm.validate();
  double alpha = cfg.alpha > 0.0 ? cfg.alpha : default_alpha(prm.p);
  require_admissible(prm.p, alpha);
  out.alpha = alpha;

  const double R = cfg.R > 0.0 ? cfg.R : 20.0 / std::sqrt(prm.omega);
  GridPtr g = make_grid(R, cfg.n, cfg.stretch);
  const int n = g->n;

  double width =
      cfg.init_width > 0.0 ? cfg.init_width : 1.0 / std::sqrt(prm.omega);
  double amp = 1.0 / (width * std::sqrt(std::numbers::pi));
  RadialFunction u0 = make_function(g, [&](double r) {
    double x = r / width;
    return amp * std::exp(-0.5 * x * x);
  });
  u0.v[n - 1] = 0.0;

  // Amplitude pre-scaling: pick the Gaussian amplitude whose fiber
  // projection has the lowest closed-form action level.  Near the critical
  // exponent a unit-mass Gaussian needs an extreme dilation to reach the
  // constraint, which concentrates the resampled profile below grid
  // resolution; balancing the blocks by amplitude first keeps the dilation
  // root near one.  The blocks are homogeneous in the amplitude, so the
  // scan costs one quadrature pass.
  {
    FunctionalBreakdown bd0 = fe_breakdown(u0, prm);
    double best_a = 1.0;
    double best_J = std::numeric_limits<double>::infinity();
    for (int k = -6; k <= 10; ++k) {
      double a = std::pow(2.0, 0.5 * k);
      double a2 = a * a, a4 = a2 * a2;
      FunctionalBreakdown ba;
      ba.A = a2 * bd0.A;
      ba.B = a2 * bd0.B;
      ba.C = a4 * bd0.C;
      ba.D = a4 * a2 * bd0.D;
      ba.E = a4 * a4 * bd0.E;
      ba.F = std::pow(a, prm.p + 1.0) * bd0.F;
      try {
        double J = reduced_value(ba, prm, alpha);
        if (std::isfinite(J) && J < best_J) {
          best_J = J;
          best_a = a;
        }
      } catch (const std::exception&) {
        // amplitude outside the bracketable range; skip
      }
    }
    for (int i = 0; i < n; ++i) u0.v[i] *= best_a;
  }

  ProjectOptions loop_opt;
  loop_opt.refine_tol = cfg.constraint_tol;
  loop_opt.blocks = fe_breakdown;  // stay consistent with the descent metric
  ProjectOptions final_opt;        // defaults: nodal blocks, tight residual

  RadialFunction u;
  FunctionalBreakdown bd;
  try {
    Projection pj = project_to_M(u0, prm, alpha, loop_opt);
    u = std::move(pj.u);
    bd = pj.bd;
  } catch (const std::exception& ex) {
    out.message = std::string("initial projection failed: ") + ex.what();
    out.u_star = std::move(u0);
    return out;
  }

  const char* trace_env = std::getenv("CSGS_TRACE");
  const int trace = trace_env ? std::atoi(trace_env) : 0;
  double s = 1.0;
  bool converged = false;
  std::string message;
  int iter = 0;

  // Conjugate-gradient state (Polak-Ribiere+ in the preconditioner metric).
  std::vector<double> dir, S_prev, y_prev;
  double gsq_prev = 0.0;

  // Accepted objective values, most recent last; the nonmonotone line search
  // measures decrease against the worst of these, which tolerates the
  // round-off-scale wobble a projection step can introduce.
  std::vector<double> Jhist;

  // Objective along the search ray: the post-projection action of the trial,
  // so the line search scores exactly the iterate it would produce (scoring
  // the unprojected trial leaves a small resampling mismatch that stalls the
  // search near convergence).  +inf marks a degenerate trial.  The ground
  // state is positive, so trials fold onto the positive cone.
  struct RayEval {
    double J = std::numeric_limits<double>::infinity();
    Projection pr;
  };
  auto ray_eval = [&](const std::vector<double>& p0,
                      const std::vector<double>& pdir, double step) {
    RayEval ev;
    RadialFunction ut(g);
    for (int i = 0; i < n; ++i) ut.v[i] = std::abs(p0[i] - step * pdir[i]);
    ut.v[n - 1] = 0.0;
    try {
      ev.pr = project_to_M(ut, prm, alpha, loop_opt);
      ev.J = ev.pr.bd.I;
    } catch (const std::exception&) {
      // leave +inf
    }
    return ev;
  };

  for (; iter < cfg.max_iters; ++iter) {
    Precond pc(*g, prm.omega, u, prm.mu);
    std::vector<double> Sf = weak_gradient(u, prm);
    std::vector<double> G = constraint_gradient(u, prm, alpha);
    Sf[n - 1] = 0.0;
    G[n - 1] = 0.0;
    std::vector<double> yf = pc.solve(Sf);
    std::vector<double> yG = pc.solve(G);
    double SG = 0.0, GG = 0.0;
    for (int i = 0; i < n; ++i) {
      SG += Sf[i] * yG[i];
      GG += G[i] * yG[i];
    }
    // Deflate by the constraint gradient.  The constraint manifold is
    // "natural" only in the continuum; the discrete constrained minimizer
    // carries a small multiplier nu, so the full gradient converges to
    // nu * G rather than zero on the manifold.  Descent and the convergence
    // test both use the tangential part; the normal part would be undone by
    // re-projection anyway and only stalls the line search.
    double nu = GG > 0.0 ? SG / GG : 0.0;
    std::vector<double> S(n), y(n);
    for (int i = 0; i < n; ++i) {
      S[i] = Sf[i] - nu * G[i];
      y[i] = yf[i] - nu * yG[i];
    }
    double gsq = 0.0;
    for (int i = 0; i < n; ++i) gsq += S[i] * y[i];
    gsq = std::max(gsq, 0.0);
    double rg = std::sqrt(gsq / (bd.A + prm.omega * bd.B));

    if (cfg.debug_fd && iter < 3) {
      double un = 0.0, dn = 0.0;
      for (int i = 0; i < n; ++i) {
        un += u.v[i] * u.v[i];
        dn += y[i] * y[i];
      }
      double eps = 1e-6 * std::sqrt(un / std::max(dn, 1e-300));
      RadialFunction up(g), um(g);
      for (int i = 0; i < n; ++i) {
        up.v[i] = u.v[i] + eps * y[i];
        um.v[i] = u.v[i] - eps * y[i];
      }
      double jp = reduced_value(fe_breakdown(up, prm), prm, alpha);
      double jm = reduced_value(fe_breakdown(um, prm), prm, alpha);
      double fd = (jp - jm) / (2.0 * eps);
      out.fd_slope_error.push_back(std::abs(fd - gsq) /
                                   std::max(gsq, 1e-300));
    }

    if (trace) {
      std::fprintf(stderr, "iter %4d  rg=%.3e  I=%.12g  s=%.3g\n", iter, rg,
                   bd.I, s);
      if (trace >= 3) {
        FunctionalBreakdown chk = fe_breakdown(u, prm);
        std::fprintf(stderr, "  sync: I(bd)=%.17g I(chk)=%.17g dN=%.3e\n",
                     bd.I, chk.I, std::abs(bd.N - chk.N));
      }
    }

    if (rg <= cfg.grad_tol) {
      converged = true;
      break;
    }

    // Polak-Ribiere+ restartable momentum.  The projection step makes the
    // objective only piecewise smooth along the iterates, so fall back to
    // plain preconditioned descent whenever conjugacy degrades.
    double slope = gsq;
    if (dir.empty()) {
      dir = y;
    } else {
      double num = 0.0;
      for (int i = 0; i < n; ++i) num += (S[i] - S_prev[i]) * y[i];
      double beta = std::max(0.0, num / gsq_prev);
      for (int i = 0; i < n; ++i) dir[i] = y[i] + beta * dir[i];
      // Re-deflate: the momentum term was tangent at the previous iterate,
      // not at this one.  Correcting along yG keeps the trial on the
      // manifold to second order and does not change the slope (S.yG = 0).
      double Gd = 0.0;
      for (int i = 0; i < n; ++i) Gd += G[i] * dir[i];
      double zeta = GG > 0.0 ? Gd / GG : 0.0;
      slope = 0.0;
      for (int i = 0; i < n; ++i) {
        dir[i] -= zeta * yG[i];
        slope += S[i] * dir[i];
      }
      if (!(slope > 1e-3 * gsq)) {  // not a safe descent direction
        dir = y;
        slope = gsq;
      }
    }
    S_prev = S;
    y_prev = y;
    gsq_prev = gsq;

    // Nonmonotone Armijo reference (max over a short history): single
    // projections perturb the objective at round-off-adjacent scales, and a
    // strictly monotone test stalls on that noise near convergence.
    Jhist.push_back(bd.I);
    if (Jhist.size() > 10) Jhist.erase(Jhist.begin());
    double Jref = *std::max_element(Jhist.begin(), Jhist.end());
    const double J0 = bd.I;
    const std::vector<double>& base = u.v;

    // Backtrack to an Armijo-acceptable step, then expand/refine with a
    // three-point quadratic fit; momentum needs a decent 1-D minimum.
    bool accepted = false;
    RayEval ev;
    s = std::min(2.0 * s, 1.0);
    for (; s >= cfg.step_floor; s *= 0.5) {
      ev = ray_eval(base, dir, s);
      if (trace >= 2)
        std::fprintf(stderr, "  try s=%.3e  J=%.17g  need<=%.17g\n", s, ev.J,
                     Jref - cfg.armijo_c * s * slope);
      if (ev.J <= Jref - cfg.armijo_c * s * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (trace) {
        std::fprintf(stderr, "  floor: slope=%.3e gsq=%.3e J0=%.17g\n", slope,
                     gsq, J0);
        if (trace >= 2) {
          std::FILE* fp = std::fopen("/tmp/csgs_fail.txt", "w");
          if (fp) {
            for (int i = 0; i < n; ++i)
              std::fprintf(fp, "%.17g %.17g %.17g\n", g->r[i], u.v[i], dir[i]);
            std::fclose(fp);
          }
        }
      }
      message = "line search hit the step floor";
      break;
    }
    double s_best = s;
    double s_hi = 2.0 * s;
    RayEval ev_hi = ray_eval(base, dir, s_hi);
    for (int k = 0; k < 4 && ev_hi.J < ev.J; ++k) {
      s_best = s_hi;
      ev = ev_hi;
      s_hi *= 2.0;
      ev_hi = ray_eval(base, dir, s_hi);
    }
    if (std::isfinite(ev_hi.J)) {
      // Vertex of the quadratic through (0, J0), (s_best, J_best),
      // (s_hi, J_hi): J(s) ~ J0 + bb s + cc s^2.
      double denom = s_best * s_hi * (s_hi - s_best);
      double cc = (s_best * (ev_hi.J - J0) - s_hi * (ev.J - J0)) / denom;
      double bb = (ev.J - J0) / s_best - cc * s_best;
      if (cc > 0.0) {
        double s_q = -0.5 * bb / cc;
        if (s_q > 0.0 && std::isfinite(s_q)) {
          RayEval ev_q = ray_eval(base, dir, s_q);
          if (ev_q.J < ev.J) {
            s_best = s_q;
            ev = std::move(ev_q);
          }
        }
      }
    }
    s = s_best;

    u = std::move(ev.pr.u);
    bd = ev.pr.bd;
  }

  // Tangential residual at the optimizer endpoint.  The identity
  // normalization below moves the profile a multiplier-sized distance, so
  // the optimization residual is measured before it.
  Precond pc(*g, prm.omega, u, prm.mu);
  std::vector<double> Sf = weak_gradient(u, prm);
  std::vector<double> G = constraint_gradient(u, prm, alpha);
  Sf[n - 1] = 0.0;
  G[n - 1] = 0.0;
  std::vector<double> yf = pc.solve(Sf);
  std::vector<double> yG = pc.solve(G);
  double SG = 0.0, GG = 0.0;
  for (int i = 0; i < n; ++i) {
    SG += Sf[i] * yG[i];
    GG += G[i] * yG[i];
  }
  double nu = GG > 0.0 ? SG / GG : 0.0;
  double gsq = 0.0;
  for (int i = 0; i < n; ++i) gsq += (Sf[i] - nu * G[i]) * (yf[i] - nu * yG[i]);
  double rg = std::sqrt(std::max(gsq, 0.0) / (bd.A + prm.omega * bd.B));
  converged = converged && rg <= 4.0 * cfg.grad_tol;

  // Renormalize so the reported profile satisfies both variational
  // identities on the reporting discretization; fall back to a plain
  // constraint projection if that fails.
  try {
    bd = identity_normalize(u, prm, alpha);
  } catch (const std::exception&) {
    try {
      Projection pr = project_to_M(u, prm, alpha, final_opt);
      u = std::move(pr.u);
      bd = pr.bd;
    } catch (const std::exception&) {
      bd = breakdown(u, prm);
    }
  }

  out.u_star = std::move(u);
  out.sigma = bd.I;
  out.bd = bd;
  out.iterations = iter;
  out.converged = converged;
  out.message = converged ? "reduced gradient below tolerance"
              : !message.empty() ? message
                                 : "iteration limit reached";

  double quad = bd.A + prm.omega * bd.B;
  out.residuals.nehari = std::abs(bd.N) / quad;
  out.residuals.pohozaev = std::abs(bd.P) / quad;
  out.residuals.gamma = std::abs(gamma_direct(bd, prm, alpha)) /
                        gamma_scale(bd, prm, alpha);
  out.residuals.reduced_grad = rg;
  double fs = forcing_scale(out.u_star, prm);
  out.residuals.pde_l2 =
      fs > 0.0 ? pde_residual(out.u_star, prm) / fs : 0.0;
  out.decay_slope = decay_rate(out.u_star).slope;
  return out;
}

RadialFunction pde_residual_field(const RadialFunction& u, const Params& prm) {
  prm.validate();
  check_finite(u, "pde_residual");
  const Grid& g = *u.grid;
  RadialFunction lap_u = laplacian(u);
  RadialFunction u2(u.grid);
  for (int i = 0; i < g.n; ++i) u2.v[i] = u.v[i] * u.v[i];
  RadialFunction lap_u2 = laplacian(u2);
  GaugeFields gf = compute_gauge(u, prm.mu);

  RadialFunction res(u.grid);
  for (int i = 0; i < g.n; ++i) {
    double ui = u.v[i];
    res.v[i] = -lap_u.v[i] + prm.omega * ui - prm.mu * ui * lap_u2.v[i] +
               prm.q * gf.V1.v[i] * (1.0 + prm.mu * ui * ui) * ui +
               prm.q * gf.V2.v[i] * ui - prm.lambda * signed_pow(ui, prm.p);
  }
  return res;
}

double pde_residual(const RadialFunction& u, const Params& prm) {
  RadialFunction res = pde_residual_field(u, prm);
  const Grid& g = *u.grid;
  KahanAcc acc;
  for (int i = 0; i < g.n; ++i) acc.add(g.w[i] * res.v[i] * res.v[i]);
  return std::sqrt(two_pi * acc.sum);
}

double forcing_scale(const RadialFunction& u, const Params& prm) {
  check_finite(u, "forcing_scale");
  const Grid& g = *u.grid;
  KahanAcc acc;
  for (int i = 0; i < g.n; ++i) {
    double f = prm.lambda * abs_pow(u.v[i], prm.p);
    acc.add(g.w[i] * f * f);
  }
  return std::sqrt(two_pi * acc.sum);
}

namespace {

struct ShotState {
  double r, u, v;
};

// One RK4 step of u' = v, v' = f(u) - v/r.
template <class F>
ShotState rk4_step(const ShotState& s, double dr, F&& f) {
  auto du = [](double v) { return v; };
  auto dv = [&f](double r, double u, double v) { return f(u) - v / r; };
  double k1u = du(s.v), k1v = dv(s.r, s.u, s.v);
  double k2u = du(s.v + 0.5 * dr * k1v),
         k2v = dv(s.r + 0.5 * dr, s.u + 0.5 * dr * k1u, s.v + 0.5 * dr * k1v);
  double k3u = du(s.v + 0.5 * dr * k2v),
         k3v = dv(s.r + 0.5 * dr, s.u + 0.5 * dr * k2u, s.v + 0.5 * dr * k2v);
  double k4u = du(s.v + dr * k3v),
         k4v = dv(s.r + dr, s.u + dr * k3u, s.v + dr * k3v);
  return {s.r + dr, s.u + dr / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
          s.v + dr / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
}

}  // namespace

ShootingResult shooting_oracle(double omega, double lambda, double p,
                               const GridPtr& out_grid, double step) {
  if (!out_grid) throw std::invalid_argument("shooting: no output grid");
  if (!(omega > 0.0) || !(lambda > 0.0) || !(p > 1.0) || !(step > 0.0))
    throw std::invalid_argument("shooting: bad parameters");

  ShootingResult sr;
  const double sw = std::sqrt(omega);
  const double rest = std::pow(omega / lambda, 1.0 / (p - 1.0));
  const double r_lim = 18.0 / sw;
  auto f = [&](double u) { return omega * u - lambda * signed_pow(u, p); };

  // +1: turnaround before reaching zero (height too small)
  // -1: sign crossing (height too large)
  auto classify = [&](double a) -> int {
    ShotState s{step, a + 0.25 * f(a) * step * step, 0.5 * f(a) * step};
    while (s.r < r_lim) {
      s = rk4_step(s, step, f);
      if (!std::isfinite(s.u) || !std::isfinite(s.v))
        return s.u < 0.0 ? -1 : +1;
      if (s.u < 0.0) return -1;
      if (s.v > 0.0) return +1;
    }
    return s.v + sw * s.u > 0.0 ? +1 : -1;
  };

  double a_lo = rest, a_hi = 2.0 * rest;
  int k = 0;
  for (; k < 60 && classify(a_hi) > 0; ++k) {
    a_lo = a_hi;
    a_hi *= 2.0;
  }
  if (k == 60) {
    sr.message = "no sign crossing found while raising the height";
    return sr;
  }
  while (a_hi - a_lo > 1e-15 * a_hi && sr.bisections < 100) {
    double mid = 0.5 * (a_lo + a_hi);
    (classify(mid) > 0 ? a_lo : a_hi) = mid;
    ++sr.bisections;
  }
  double a = 0.5 * (a_lo + a_hi);

  // Final pass: record the trajectory, cut where |u| is smallest (the
  // integration leaves the separatrix there), and extend with the
  // asymptotic tail  u ~ C e^{-sqrt(omega) r} / sqrt(r).
  std::vector<double> rs{0.0}, us{a};
  ShotState s{step, a + 0.25 * f(a) * step * step, 0.5 * f(a) * step};
  rs.push_back(s.r);
  us.push_back(s.u);
  size_t cut = 0;
  while (s.r < r_lim) {
    s = rk4_step(s, step, f);
    if (!std::isfinite(s.u) || s.u <= 0.0 || s.v > 0.0) break;
    rs.push_back(s.r);
    us.push_back(s.u);
    if (us.back() < us[cut]) cut = us.size() - 1;
  }
  if (cut + 1 < 8) {
    sr.message = "trajectory too short to resample";
    return sr;
  }
  rs.resize(cut + 1);
  us.resize(cut + 1);
  const double r_c = rs.back(), u_c = us.back();

  MonotoneCubic spline(rs, us);
  RadialFunction prof = make_function(out_grid, [&](double r) {
    if (r <= r_c) return spline(r);
    return u_c * std::exp(-sw * (r - r_c)) * std::sqrt(r_c / r);
  });

  sr.u = std::move(prof);
  sr.u0 = a;
  sr.energy = breakdown(sr.u, Params::oracle(omega, lambda, p)).I;
  sr.ok = true;
  sr.message = "separatrix bracketed";
  return sr;
}

DecayFit decay_rate(const RadialFunction& u) {
  check_finite(u, "decay_rate");
  const Grid& g = *u.grid;
  DecayFit fit;
  fit.window_lo = 0.6 * g.R;
  fit.window_hi = 0.9 * g.R;

  struct Lsq {
    int m = 0;
    double slope = 0.0, intercept = 0.0;
  };
  auto lsq_on = [&](double lo, double hi) {
    Lsq out;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < g.n; ++i) {
      if (g.r[i] < lo || g.r[i] > hi) continue;
      if (!(u.v[i] > 1e-290)) continue;
      double x = g.r[i], y = std::log(u.v[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++out.m;
    }
    if (out.m >= 8) {
      double det = out.m * sxx - sx * sx;
      out.slope = (out.m * sxy - sx * sy) / det;
      out.intercept = (sy - out.slope * sx) / out.m;
    }
    return out;
  };

  Lsq full = lsq_on(fit.window_lo, fit.window_hi);
  if (full.m < 8) return fit;
  fit.slope = full.slope;
  fit.intercept = full.intercept;
  fit.ok = true;

  double mid = 0.5 * (fit.window_lo + fit.window_hi);
  Lsq inner = lsq_on(fit.window_lo, mid);
  Lsq outer = lsq_on(mid, fit.window_hi);
  if (inner.m >= 8 && outer.m >= 8 && inner.slope < 0.0 &&
      outer.slope < 1.10 * inner.slope)
    fit.superexponential = true;
  return fit;
}

}  // namespace csgs

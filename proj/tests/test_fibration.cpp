#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "csgs/energy.hpp"
#include "csgs/fibration.hpp"
#include "csgs/grid.hpp"

using namespace csgs;

namespace {

RadialFunction gaussian(const GridPtr& g, double width = 1.0) {
  return make_function(g, [width](double r) {
    double x = r / width;
    return std::exp(-0.5 * x * x);
  });
}

FunctionalBreakdown scale_blocks(const FunctionalBreakdown& bd, double t,
                                 double alpha, double p) {
  FunctionalBreakdown out;
  out.A = std::pow(t, 2.0 * alpha) * bd.A;
  out.B = std::pow(t, 2.0 * alpha - 2.0) * bd.B;
  out.C = std::pow(t, 4.0 * alpha) * bd.C;
  out.D = std::pow(t, 6.0 * alpha - 4.0) * bd.D;
  out.E = std::pow(t, 8.0 * alpha - 4.0) * bd.E;
  out.F = std::pow(t, (p + 1.0) * alpha - 2.0) * bd.F;
  return out;
}

}  // namespace

TEST_SUITE("fibration") {
  TEST_CASE("admissible window") {
    CHECK(admissible_alpha(6.0, 1.5));
    CHECK_FALSE(admissible_alpha(6.0, 1.0));
    CHECK_FALSE(admissible_alpha(6.0, 2.0));  // 2/(7-p) = 2 is excluded
    CHECK_FALSE(admissible_alpha(6.0, 2.5));
    CHECK(admissible_alpha(7.0, 1.01));
    CHECK(admissible_alpha(7.0, 25.0));
    CHECK_FALSE(admissible_alpha(7.0, 1.0));
    CHECK(admissible_alpha(9.0, 3.0));
    CHECK(default_alpha(6.0) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(default_alpha(7.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(default_alpha(9.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(admissible_alpha(6.0, default_alpha(6.0)));
    CHECK(admissible_alpha(5.5, default_alpha(5.5)));
    CHECK_NOTHROW(require_admissible(6.0, 1.5));
    CHECK_THROWS_AS(require_admissible(6.0, 2.5), std::invalid_argument);
  }

  TEST_CASE("unit dilation is the identity") {
    GridPtr g = make_grid(10.0, 501);
    RadialFunction u = gaussian(g);
    u.v[g->n - 1] = 0.0;
    RadialFunction s = scale(u, 1.0, 1.5);
    for (int i = 0; i < g->n; ++i) CHECK(s.v[i] == u.v[i]);
  }

  TEST_CASE("dilation pins the boundary node") {
    GridPtr g = make_grid(10.0, 801);
    RadialFunction u = gaussian(g, 2.0);
    for (double t : {0.7, 0.95, 1.3}) {
      RadialFunction s = scale(u, t, 1.5);
      CHECK(s.v[g->n - 1] == 0.0);
    }
  }

  TEST_CASE("block scaling laws under resampled dilation") {
    GridPtr g = make_grid(14.0, 8001);
    Params prm;
    double alpha = 1.5, t = 1.25;
    RadialFunction u = gaussian(g);
    u.v[g->n - 1] = 0.0;
    FunctionalBreakdown bd = breakdown(u, prm);
    FunctionalBreakdown bt = breakdown(scale(u, t, alpha), prm);
    FunctionalBreakdown pred = scale_blocks(bd, t, alpha, prm.p);
    CHECK(bt.A == doctest::Approx(pred.A).epsilon(2e-4));
    CHECK(bt.B == doctest::Approx(pred.B).epsilon(2e-4));
    CHECK(bt.C == doctest::Approx(pred.C).epsilon(2e-4));
    CHECK(bt.D == doctest::Approx(pred.D).epsilon(2e-4));
    CHECK(bt.E == doctest::Approx(pred.E).epsilon(2e-4));
    CHECK(bt.F == doctest::Approx(pred.F).epsilon(2e-4));
  }

  TEST_CASE("path value and derivative are consistent") {
    GridPtr g = make_grid(12.0, 2001);
    Params prm;
    double alpha = 1.5;
    FunctionalBreakdown bd = breakdown(gaussian(g), prm);

    // Gamma of the scaled blocks equals t * gamma'(t), exactly in closed
    // form.
    for (double t : {0.6, 0.9, 1.0, 1.4, 2.0}) {
      double lhs = gamma_direct(scale_blocks(bd, t, alpha, prm.p), prm, alpha);
      double rhs = t * path_derivative(bd, t, prm, alpha);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }

    // path_value at t matches I of the scaled blocks.
    for (double t : {0.7, 1.0, 1.6}) {
      FunctionalBreakdown sb = scale_blocks(bd, t, alpha, prm.p);
      double I = 0.5 * (sb.A + prm.omega * sb.B) + prm.mu * sb.C +
                 0.5 * prm.q * sb.D + 0.25 * prm.q * prm.mu * sb.E -
                 prm.lambda * sb.F / (prm.p + 1.0);
      CHECK(path_value(bd, t, prm, alpha) ==
            doctest::Approx(I).epsilon(1e-13));
    }

    // Finite-difference cross-check of the path derivative.
    double t0 = 1.2, eps = 1e-6;
    double fd = (path_value(bd, t0 + eps, prm, alpha) -
                 path_value(bd, t0 - eps, prm, alpha)) /
                (2.0 * eps);
    CHECK(path_derivative(bd, t0, prm, alpha) ==
          doctest::Approx(fd).epsilon(1e-7));
  }

  TEST_CASE("the factored fiber derivative decreases strictly") {
    GridPtr g = make_grid(12.0, 2001);
    Params prm;
    double alpha = 1.5;
    FunctionalBreakdown bd = breakdown(gaussian(g), prm);
    double prev = g_value(bd, 0.2, prm, alpha);
    for (double t = 0.3; t <= 3.0; t += 0.1) {
      double cur = g_value(bd, t, prm, alpha);
      CHECK(cur < prev);
      prev = cur;
    }
  }

  TEST_CASE("fiber root is the unique maximum of the path") {
    GridPtr g = make_grid(12.0, 2001);
    Params prm;
    double alpha = 1.5;
    FunctionalBreakdown bd = breakdown(gaussian(g), prm);
    int iters = 0;
    double t_star = fiber_root(bd, prm, alpha, &iters);
    CHECK(t_star > 0.0);
    CHECK(iters > 0);
    CHECK(std::abs(g_value(bd, t_star, prm, alpha)) <=
          1e-9 * std::abs(g_value(bd, 0.5 * t_star, prm, alpha)));
    double J = path_value(bd, t_star, prm, alpha);
    for (int k = -25; k <= 25; ++k) {
      double t = t_star * std::pow(1.12, k);
      CHECK(path_value(bd, t, prm, alpha) <= J + 1e-12 * std::abs(J));
    }
  }

  TEST_CASE("projection lands on the constraint set") {
    GridPtr g = make_grid(12.0, 4001);
    Params prm;
    double alpha = 1.5;
    RadialFunction u = gaussian(g, 1.4);
    u.v[g->n - 1] = 0.0;
    Projection pr = project_to_M(u, prm, alpha);
    FunctionalBreakdown bd = breakdown(pr.u, prm);
    double gam = gamma_direct(bd, prm, alpha);
    CHECK(std::abs(gam) <= 1e-11 * gamma_scale(bd, prm, alpha));
    CHECK(pr.gamma_residual <= 1e-11);
    // The reported breakdown belongs to the projected profile.
    CHECK(pr.bd.I == doctest::Approx(bd.I).epsilon(1e-15));

    // Idempotence: reprojecting moves t only within the refine tolerance.
    Projection pr2 = project_to_M(pr.u, prm, alpha);
    CHECK(std::abs(pr2.t - 1.0) <= 1e-8);
  }

  TEST_CASE("projection honours a caller-supplied block evaluator") {
    GridPtr g = make_grid(12.0, 2001);
    Params prm;
    double alpha = 1.5;
    RadialFunction u = gaussian(g);
    u.v[g->n - 1] = 0.0;
    int calls = 0;
    ProjectOptions opt;
    opt.blocks = [&calls](const RadialFunction& w, const Params& pp) {
      ++calls;
      return breakdown(w, pp);
    };
    Projection pr = project_to_M(u, prm, alpha, opt);
    CHECK(calls > 0);
    FunctionalBreakdown bd = breakdown(pr.u, prm);
    CHECK(std::abs(gamma_direct(bd, prm, alpha)) <=
          1e-11 * gamma_scale(bd, prm, alpha));
  }

  TEST_CASE("degenerate inputs are rejected") {
    GridPtr g = make_grid(10.0, 301);
    Params prm;
    RadialFunction zero(g);
    CHECK_THROWS_AS(project_to_M(zero, prm, 1.5), std::domain_error);

    // A breakdown with no nonlinear term has no dilation root.
    FunctionalBreakdown flat;
    flat.A = 1.0;
    flat.B = 1.0;
    CHECK_THROWS(fiber_root(flat, prm, 1.5));
  }
}

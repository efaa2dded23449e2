#include <cmath>
#include <cstdlib>

#include "doctest.h"

#include "csgs/energy.hpp"
#include "csgs/grid.hpp"
#include "csgs/solver.hpp"

using namespace csgs;

namespace {

SolveConfig quick_config(int n) {
  SolveConfig cfg;
  cfg.n = n;
  cfg.R = 20.0;
  return cfg;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("constrained minimizer at unit parameters") {
    Params prm;  // omega = mu = q = lambda = 1, p = 6
    SolveResult res = minimize_on_M(prm, quick_config(1001));
    REQUIRE(res.converged);
    CHECK(res.iterations < 200);
    CHECK(res.residuals.reduced_grad <= 4e-6);
    // Both variational identities hold on the reported profile.
    CHECK(res.residuals.nehari <= 1e-9);
    CHECK(res.residuals.pohozaev <= 1e-9);
    CHECK(res.residuals.gamma <= 1e-9);
    // Strong-form residual, normalized by the forcing scale.
    CHECK(forcing_scale(res.u_star, prm) > 0.0);
    CHECK(res.residuals.pde_l2 <= 5e-3);
    // Positive in the interior, pinned at the boundary.
    const Grid& g = *res.u_star.grid;
    for (int i = 0; i + 1 < g.n; ++i) CHECK(res.u_star.v[i] > 0.0);
    CHECK(res.u_star.v[g.n - 1] == 0.0);
    // Exponential tail with a definite negative log-slope.
    CHECK(res.decay_slope < -0.8);
    CHECK(res.decay_slope > -1.3);
    // Energy blocks of a nontrivial state.
    CHECK(res.sigma > 0.0);
    CHECK(res.bd.F > 0.0);
  }

  TEST_CASE("strong-form residual halves at second order") {
    Params prm;
    SolveResult coarse = minimize_on_M(prm, quick_config(501));
    SolveResult fine = minimize_on_M(prm, quick_config(1001));
    REQUIRE(coarse.converged);
    REQUIRE(fine.converged);
    CHECK(fine.residuals.pde_l2 > 0.0);
    CHECK(coarse.residuals.pde_l2 / fine.residuals.pde_l2 >= 3.0);
    // The minimum level itself moves by much less than the residual.
    CHECK(std::abs(coarse.sigma - fine.sigma) <= 2e-2 * fine.sigma);
  }

  TEST_CASE("line-search slope agrees with finite differences") {
    Params prm;
    SolveConfig cfg = quick_config(501);
    cfg.debug_fd = true;
    SolveResult res = minimize_on_M(prm, cfg);
    REQUIRE_FALSE(res.fd_slope_error.empty());
    for (double e : res.fd_slope_error) CHECK(e <= 1e-6);
  }

  TEST_CASE("semilinear reference values are stable") {
    GridPtr g = make_grid(20.0, 2001);
    ShootingResult sr = shooting_oracle(1.0, 1.0, 6.0, g);
    REQUIRE(sr.ok);
    CHECK(sr.bisections > 0);
    CHECK(std::abs(sr.energy - 3.455828363008) <= 1e-9);
    CHECK(std::abs(sr.u0 - 1.937334273514) <= 1e-9);
    CHECK(std::abs(sr.u.v[0] - sr.u0) <= 1e-12);
  }

  TEST_CASE("semilinear reference obeys the parameter scalings") {
    // u_omega(x) = omega^{1/(p-1)} u(sqrt(omega) x) maps the omega = 1
    // state to omega > 1, so the action scales by omega^{2/(p-1)}.
    const double p = 6.0;
    GridPtr g1 = make_grid(20.0, 2001);
    GridPtr g2 = make_grid(20.0 / std::sqrt(2.0), 2001);
    ShootingResult base = shooting_oracle(1.0, 1.0, p, g1);
    ShootingResult sw = shooting_oracle(2.0, 1.0, p, g2);
    REQUIRE(base.ok);
    REQUIRE(sw.ok);
    double pred = std::pow(2.0, 2.0 / (p - 1.0)) * base.energy;
    CHECK(std::abs(sw.energy - pred) <= 1e-9 * pred);

    // lambda only rescales the amplitude: action scales by
    // lambda^{-2/(p-1)} on the same grid.
    ShootingResult sl = shooting_oracle(1.0, 2.0, p, g1);
    REQUIRE(sl.ok);
    double predl = std::pow(2.0, -2.0 / (p - 1.0)) * base.energy;
    CHECK(std::abs(sl.energy - predl) <= 1e-9 * predl);
  }

  TEST_CASE("decoupled limit of the solver matches the reference") {
    Params prm = Params::oracle(1.0, 1.0, 6.0);
    SolveConfig cfg = quick_config(1001);
    SolveResult res = minimize_on_M(prm, cfg);
    REQUIRE(res.converged);
    GridPtr g = res.u_star.grid;
    ShootingResult sr = shooting_oracle(prm.omega, prm.lambda, prm.p, g);
    REQUIRE(sr.ok);
    CHECK(std::abs(res.sigma - sr.energy) <= 1e-3 * sr.energy);
    double worst = 0.0;
    for (int i = 0; i < g->n; ++i)
      worst = std::max(worst, std::abs(res.u_star.v[i] - sr.u.v[i]));
    CHECK(worst <= 1e-2);
  }

  TEST_CASE("tail slope fit recovers known decay laws") {
    GridPtr g = make_grid(10.0, 2001);
    RadialFunction expo = make_function(g, [](double r) { return std::exp(-2.0 * r); });
    DecayFit fe = decay_rate(expo);
    CHECK(fe.ok);
    CHECK(std::abs(fe.slope + 2.0) <= 1e-3);
    CHECK_FALSE(fe.superexponential);
    CHECK(fe.window_lo == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(fe.window_hi == doctest::Approx(9.0).epsilon(1e-12));

    RadialFunction gauss = make_function(g, [](double r) { return std::exp(-r * r); });
    DecayFit fg = decay_rate(gauss);
    CHECK(fg.ok);
    CHECK(fg.superexponential);
  }

  TEST_CASE("strong-form residual vanishes only on actual solutions") {
    GridPtr g = make_grid(12.0, 1001);
    Params prm;
    RadialFunction u = make_function(g, [](double r) { return std::exp(-0.5 * r * r); });
    CHECK(pde_residual(u, prm) / forcing_scale(u, prm) > 0.1);
  }
}

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"

#include "csgs/energy.hpp"
#include "csgs/fibration.hpp"
#include "csgs/grid.hpp"

using namespace csgs;

namespace {

constexpr double kPi = std::numbers::pi;

RadialFunction gaussian(const GridPtr& g) {
  return make_function(g, [](double r) { return std::exp(-0.5 * r * r); });
}

RadialFunction bumpy(const GridPtr& g) {
  return make_function(g, [](double r) {
    return (1.0 + 0.4 * std::sin(1.7 * r)) * std::exp(-0.5 * r * r);
  });
}

}  // namespace

TEST_SUITE("energy") {
  TEST_CASE("Gaussian blocks against closed forms") {
    GridPtr g = make_grid(10.0, 4001);
    Params prm;  // p = 6, unit couplings
    FunctionalBreakdown bd = breakdown(gaussian(g), prm);
    CHECK(bd.A == doctest::Approx(kPi).epsilon(1e-5));
    CHECK(bd.B == doctest::Approx(kPi).epsilon(1e-5));
    CHECK(bd.C == doctest::Approx(kPi / 4.0).epsilon(1e-5));
    CHECK(bd.D == doctest::Approx(kPi / 4.0 * std::log(4.0 / 3.0)).epsilon(1e-5));
    CHECK(bd.E == doctest::Approx(kPi / 4.0 * std::log(9.0 / 8.0)).epsilon(1e-5));
    CHECK(bd.F == doctest::Approx(2.0 * kPi / 7.0).epsilon(1e-5));

    // Derived scalars recombine the blocks exactly.
    double I = 0.5 * (bd.A + bd.B) + bd.C + 0.5 * bd.D + 0.25 * bd.E -
               bd.F / 7.0;
    double N = bd.A + bd.B + 4.0 * bd.C + 3.0 * bd.D + 2.0 * bd.E - bd.F;
    double P = bd.B - 2.0 * bd.F / 7.0 + 2.0 * bd.D + bd.E;
    CHECK(bd.I == doctest::Approx(I).epsilon(1e-14));
    CHECK(bd.N == doctest::Approx(N).epsilon(1e-14));
    CHECK(bd.P == doctest::Approx(P).epsilon(1e-14));
    CHECK(action(gaussian(g), prm) == doctest::Approx(bd.I).epsilon(1e-15));
  }

  TEST_CASE("Nehari scalar equals the derivative along u") {
    GridPtr g = make_grid(9.0, 3001);
    Params prm;
    RadialFunction u = bumpy(g);
    FunctionalBreakdown bd = breakdown(u, prm);
    CHECK(gateaux(u, u, prm) == doctest::Approx(bd.N).epsilon(1e-12));
  }

  TEST_CASE("Gateaux derivative matches finite differences") {
    GridPtr g = make_grid(9.0, 1001);
    Params prm;
    RadialFunction u = gaussian(g);
    RadialFunction phi = make_function(g, [](double r) {
      return std::cos(2.0 * r) * std::exp(-0.4 * r * r);
    });
    double eps = 1e-6;
    RadialFunction up(g), um(g);
    for (int i = 0; i < g->n; ++i) {
      up.v[i] = u.v[i] + eps * phi.v[i];
      um.v[i] = u.v[i] - eps * phi.v[i];
    }
    double fd = (action(up, prm) - action(um, prm)) / (2.0 * eps);
    CHECK(gateaux(u, phi, prm) == doctest::Approx(fd).epsilon(1e-7));
  }

  TEST_CASE("the two dilation-derivative routes agree") {
    GridPtr g = make_grid(9.0, 2001);
    Params prm;
    double alpha = 1.5;
    FunctionalBreakdown bd = breakdown(bumpy(g), prm);
    double direct = gamma_direct(bd, prm, alpha);
    double via_np = gamma_np(bd, alpha);
    CHECK(std::abs(direct - via_np) <=
          1e-10 * gamma_scale(bd, prm, alpha));
  }

  TEST_CASE("coercivity decomposition is exact and positive") {
    GridPtr g = make_grid(9.0, 1501);
    Params prm;
    FunctionalBreakdown bd = breakdown(bumpy(g), prm);
    for (double alpha : {1.2, 1.5, 1.9}) {
      CoercivityCoeffs cc = coercivity_coeffs(prm.p, alpha);
      CHECK(cc.K == doctest::Approx((prm.p + 1.0) * alpha - 2.0));
      CHECK(cc.cA > 0.0);
      CHECK(cc.cB > 0.0);
      CHECK(cc.cC > 0.0);
      CHECK(cc.cD > 0.0);
      CHECK(cc.cE > 0.0);
      double lhs = bd.I - gamma_direct(bd, prm, alpha) / cc.K;
      double rhs = cc.cA * bd.A + cc.cB * prm.omega * bd.B +
                   cc.cC * prm.mu * bd.C + cc.cD * prm.q * bd.D +
                   cc.cE * prm.q * prm.mu * bd.E;
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    }
  }

  TEST_CASE("physical coupling") {
    CHECK(coupling_from_physical(2.0, std::sqrt(2.0)) ==
          doctest::Approx(8.0).epsilon(1e-14));
    CHECK(coupling_from_physical(1.0, -2.0) ==
          doctest::Approx(0.25).epsilon(1e-14));
    CHECK_THROWS_AS(coupling_from_physical(1.0, 0.0), std::invalid_argument);
  }

  TEST_CASE("power helpers") {
    CHECK(signed_pow(-2.0, 3.0) == doctest::Approx(-8.0).epsilon(1e-14));
    CHECK(abs_pow(-2.0, 3.0) == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(signed_pow(0.0, 0.5) == 0.0);
    CHECK(abs_pow(0.0, 2.5) == 0.0);
    CHECK(signed_pow(3.0, 2.0) == doctest::Approx(9.0).epsilon(1e-14));
  }

  TEST_CASE("parameter validation") {
    Params prm;
    prm.omega = 0.0;
    CHECK_THROWS_AS(prm.validate(), std::invalid_argument);
    prm = Params{};
    prm.lambda = -1.0;
    CHECK_THROWS_AS(prm.validate(), std::invalid_argument);
    prm = Params{};
    prm.p = 1.0;
    CHECK_THROWS_AS(prm.validate(), std::invalid_argument);
    prm = Params{};
    prm.mu = 0.0;  // production mode needs mu > 0
    CHECK_THROWS_AS(prm.validate(), std::invalid_argument);
    prm = Params{};
    prm.q = 0.0;
    CHECK_THROWS_AS(prm.validate(), std::invalid_argument);
    // The semilinear reference limit allows both to vanish.
    CHECK_NOTHROW(Params::oracle(1.0, 1.0, 6.0).validate());
    CHECK_NOTHROW(Params::oracle(2.0, 0.5, 3.0).validate());
  }
}

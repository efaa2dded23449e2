#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "csgs/energy.hpp"
#include "csgs/nonexistence.hpp"
#include "csgs/util.hpp"

using namespace csgs;

namespace {

Params cubic_params(double q, double mu = 1.0, double lambda = 1.0) {
  Params prm;
  prm.p = 3.0;
  prm.q = q;
  prm.mu = mu;
  prm.lambda = lambda;
  prm.omega = 1.0;
  return prm;
}

}  // namespace

TEST_SUITE("nonexistence") {
  TEST_CASE("coupling regimes and their coefficients") {
    CHECK(regime_of(0.1) == Regime::small_q);
    CHECK(regime_of(1.0 / 3.0) == Regime::mid_q);
    CHECK(regime_of(1.0) == Regime::mid_q);
    CHECK(regime_of(2.0) == Regime::large_q);
    CHECK(regime_of(50.0) == Regime::large_q);
    CHECK_THROWS_AS(regime_of(0.0), std::invalid_argument);
    CHECK_THROWS_AS(regime_of(-1.0), std::invalid_argument);

    double c4 = 0, c6 = 0;
    Params prm = cubic_params(0.1, 2.0);
    regime_coefficients(prm, c4, c6);
    CHECK(c4 == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(c6 == doctest::Approx(0.2).epsilon(1e-15));

    prm = cubic_params(0.5, 2.0);
    regime_coefficients(prm, c4, c6);
    CHECK(c4 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c6 == doctest::Approx(1.0).epsilon(1e-15));

    prm = cubic_params(7.0, 2.0);
    regime_coefficients(prm, c4, c6);
    CHECK(c4 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c6 == doctest::Approx(4.0).epsilon(1e-15));
  }

  TEST_CASE("cubic nonlinearity has a closed-form threshold") {
    // p = 3: omega* = (lambda - c4)^2 / (4 c6), t* = sqrt((lambda-c4)/(2 c6)).
    ThresholdResult tr = thresholds(cubic_params(0.1));
    CHECK(tr.regime == Regime::small_q);
    CHECK(std::abs(tr.omega_sharp - 1.225) <= 1e-9);
    CHECK(std::abs(tr.t_star - 1.8708286933869707) <= 1e-9);
    CHECK_FALSE(tr.sufficient_is_analogy);

    ThresholdResult mid = thresholds(cubic_params(1.0, 1.0, 2.0));
    CHECK(mid.regime == Regime::mid_q);
    CHECK(std::abs(mid.omega_sharp - 0.25) <= 1e-9);
    CHECK(std::abs(mid.t_star - std::sqrt(0.5)) <= 1e-9);
    CHECK(mid.sufficient_is_analogy);

    // lambda <= c4 leaves no positive deficit: the threshold collapses.
    ThresholdResult none = thresholds(cubic_params(1.0, 1.0, 1.0));
    CHECK(none.omega_sharp == 0.0);
    CHECK(none.t_star == 0.0);
  }

  TEST_CASE("thresholds vary continuously across regime boundaries") {
    const double eps = 1e-9;
    {
      ThresholdResult below = thresholds(cubic_params(1.0 / 3.0 - 1e-12, 1.0, 2.0));
      ThresholdResult at = thresholds(cubic_params(1.0 / 3.0, 1.0, 2.0));
      CHECK(std::abs(below.omega_sharp - at.omega_sharp) <= eps);
      CHECK(std::abs(below.omega_sufficient - at.omega_sufficient) <= eps);
    }
    {
      ThresholdResult below = thresholds(cubic_params(2.0 - 1e-12, 1.0, 2.0));
      ThresholdResult at = thresholds(cubic_params(2.0, 1.0, 2.0));
      CHECK(std::abs(below.omega_sharp - at.omega_sharp) <= eps);
      CHECK(std::abs(below.omega_sufficient - at.omega_sufficient) <= eps);
    }
  }

  TEST_CASE("the certificate threshold has a closed form at p = 3") {
    // (5-p)/8 * ((p+1) lambda)^{4/(5-p)} * ((p-1)/(24 c6))^{(p-1)/(5-p)}
    // with p = 3, q = 0.1, mu = 1, lambda = 1 gives 16/4 * 2/2.4 = 10/3.
    double ob = sufficient_threshold(cubic_params(0.1));
    CHECK(std::abs(ob - 10.0 / 3.0) <= 1e-9);
  }

  TEST_CASE("the certificate dominates the sharp threshold") {
    SplitMix64 rng(20260819ull);
    for (int k = 0; k < 500; ++k) {
      Params prm;
      prm.p = rng.uniform(1.0 + 1e-3, 5.0 - 1e-3);
      prm.q = rng.uniform(0.02, 5.0);
      prm.mu = rng.uniform(0.05, 10.0);
      prm.lambda = rng.uniform(0.05, 10.0);
      prm.omega = 1.0;
      ThresholdResult tr = thresholds(prm);
      if (tr.sufficient_overflow) continue;
      CHECK(tr.omega_sufficient >= tr.omega_sharp - 1e-9 * (1.0 + tr.omega_sharp));
      if (tr.omega_sharp > 0.0) {
        // g dips negative below the sharp threshold and stays positive above.
        double below = 0.5 * tr.omega_sharp;
        CHECK(g_pointwise(tr.t_star, below, prm) < 0.0);
        double above = 2.0 * tr.omega_sharp + 1e-6;
        bool positive = true;
        for (int j = 1; j <= 60; ++j) {
          double t = 0.05 * j;
          if (g_pointwise(t, above, prm) <= 0.0) positive = false;
        }
        CHECK(positive);
      }
    }
  }

  TEST_CASE("the certificate overflows gracefully near the critical power") {
    Params prm = cubic_params(0.1, 1.0, 2.0);
    prm.p = 4.999999;
    ThresholdResult tr = thresholds(prm);
    CHECK(tr.sufficient_overflow);
    CHECK(std::isinf(tr.omega_sufficient));
    CHECK(std::isfinite(tr.omega_sharp));

    prm.p = 4.9;
    tr = thresholds(prm);
    CHECK_FALSE(tr.sufficient_overflow);
    CHECK(std::isfinite(tr.omega_sufficient));
  }

  TEST_CASE("sweeps report the expected monotone structure") {
    Params base = cubic_params(0.1);

    SweepResult sq = monotonicity_sweep("q", base, {0.05, 0.1, 0.2});
    REQUIRE(sq.rows.size() == 3);
    CHECK(std::abs(sq.rows[0].omega_sharp - 3.6125) <= 1e-9);
    CHECK(std::abs(sq.rows[1].omega_sharp - 1.225) <= 1e-9);
    CHECK(std::abs(sq.rows[2].omega_sharp - 0.2) <= 1e-9);
    CHECK(sq.monotone_ok);
    CHECK(sq.mu_bound_ok);

    std::vector<double> mus;
    for (int k = -3; k <= 3; ++k) mus.push_back(std::pow(10.0, k));
    Params quad = base;
    quad.p = 2.0;
    SweepResult sm = monotonicity_sweep("mu", quad, mus, 2);
    CHECK(sm.monotone_ok);
    CHECK(sm.mu_bound_ok);
    for (size_t i = 1; i < sm.rows.size(); ++i)
      CHECK(sm.rows[i].omega_sharp <=
            sm.rows[i - 1].omega_sharp + 1e-12 * (1.0 + sm.rows[i - 1].omega_sharp));

    SweepResult sp = monotonicity_sweep("p", base, {1.5, 2.0, 2.5, 3.0, 4.0});
    CHECK(sp.monotone_ok);  // vacuously true for the p axis
    CHECK(sp.rows.size() == 5);
  }

  TEST_CASE("sweep results are independent of the job count") {
    Params base = cubic_params(0.3);
    std::vector<double> vals = {0.05, 0.1, 0.5, 1.0, 2.5};
    SweepResult one = monotonicity_sweep("q", base, vals, 1);
    SweepResult four = monotonicity_sweep("q", base, vals, 4);
    REQUIRE(one.rows.size() == four.rows.size());
    for (size_t i = 0; i < one.rows.size(); ++i) {
      CHECK(one.rows[i].omega_sharp == four.rows[i].omega_sharp);
      CHECK(one.rows[i].omega_sufficient == four.rows[i].omega_sufficient);
      CHECK(one.rows[i].t_star == four.rows[i].t_star);
    }
  }

  TEST_CASE("invalid sweep and threshold requests are rejected") {
    Params base = cubic_params(0.1);
    CHECK_THROWS_AS(monotonicity_sweep("omega", base, {1.0, 2.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(monotonicity_sweep("q", base, {}), std::invalid_argument);
    CHECK_THROWS_AS(monotonicity_sweep("q", base, {0.2, 0.1}),
                    std::invalid_argument);
    Params super = base;
    super.p = 6.0;
    CHECK_THROWS_AS(thresholds(super), std::invalid_argument);
  }
}

#include "csgs/nonexistence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "csgs/util.hpp"

namespace csgs {

Regime regime_of(double q) {
  if (!(q > 0.0)) throw std::invalid_argument("regime_of: q must be positive");
  if (q < 1.0 / 3.0) return Regime::small_q;
  if (q < 2.0) return Regime::mid_q;
  return Regime::large_q;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::small_q: return "small_q";
    case Regime::mid_q: return "mid_q";
    default: return "large_q";
  }
}

void regime_coefficients(const Params& prm, double& c4, double& c6) {
  switch (regime_of(prm.q)) {
    case Regime::small_q:
      c4 = 3.0 * prm.q;
      c6 = prm.q * prm.mu;
      break;
    case Regime::mid_q:
      c4 = 1.0;
      c6 = prm.q * prm.mu;
      break;
    default:
      c4 = 1.0;
      c6 = 2.0 * prm.mu;
      break;
  }
}

static void require_subcritical(const Params& prm) {
  prm.validate();
  if (!(prm.p < 5.0))
    throw std::invalid_argument("thresholds: p must lie in (1, 5)");
  if (!(prm.q > 0.0) || !(prm.mu > 0.0))
    throw std::invalid_argument("thresholds: q and mu must be positive");
}

double g_pointwise(double t, double omega, const Params& prm) {
  require_subcritical(prm);
  double c4, c6;
  regime_coefficients(prm, c4, c6);
  double t2 = t * t;
  return omega * t2 + c4 * t2 * t2 + c6 * t2 * t2 * t2 -
         prm.lambda * abs_pow(t, prm.p + 1.0);
}

namespace {

// Deficit lambda t^{p-1} - c4 t^2 - c6 t^4; its positive part's supremum is
// the least omega closing the pointwise obstruction.
double deficit(double t, double lambda, double p, double c4, double c6) {
  double t2 = t * t;
  return lambda * abs_pow(t, p - 1.0) - c4 * t2 - c6 * t2 * t2;
}

// Candidate balance scale exp(log(a/b)/e), skipped when it leaves the
// representable range.
void push_scale(std::vector<double>& out, double a, double b, double e) {
  if (!(a > 0.0) || !(b > 0.0) || std::abs(e) < 1e-9) return;
  double lg = std::log(a / b) / e;
  if (std::abs(lg) < 60.0) out.push_back(std::exp(lg));
}

}  // namespace

ThresholdResult sharp_threshold(const Params& prm) {
  require_subcritical(prm);
  ThresholdResult res;
  res.regime = regime_of(prm.q);
  res.sufficient_is_analogy = res.regime != Regime::small_q;
  double c4, c6;
  regime_coefficients(prm, c4, c6);
  const double lambda = prm.lambda, p = prm.p;

  if (p == 3.0) {
    if (lambda <= c4) {
      res.omega_sharp = 0.0;
      res.t_star = 0.0;
    } else {
      res.omega_sharp = (lambda - c4) * (lambda - c4) / (4.0 * c6);
      res.t_star = std::sqrt((lambda - c4) / (2.0 * c6));
    }
    return res;
  }

  std::vector<double> scales;
  push_scale(scales, lambda, c4, 3.0 - p);
  push_scale(scales, lambda, c6, 5.0 - p);
  push_scale(scales, c4, c6, 2.0);
  scales.push_back(1.0);
  double lo = *std::min_element(scales.begin(), scales.end()) * 1e-4;
  double hi = *std::max_element(scales.begin(), scales.end()) * 1e4;

  // The deficit is strictly unimodal past its initial sign pattern only for
  // p <= 3; for p > 3 it can dip before the hump.  A dense log ladder finds
  // the global maximum either way, then golden-section sharpens it.
  const int m = 6001;
  double log_lo = std::log(lo), log_hi = std::log(hi);
  double best_t = lo, best_v = deficit(lo, lambda, p, c4, c6);
  int best_i = 0;
  for (int i = 0; i < m; ++i) {
    double t = std::exp(log_lo + (log_hi - log_lo) * i / (m - 1));
    double v = deficit(t, lambda, p, c4, c6);
    if (v > best_v) {
      best_v = v;
      best_t = t;
      best_i = i;
    }
  }

  double a = std::exp(log_lo + (log_hi - log_lo) * std::max(0, best_i - 1) /
                                   (m - 1));
  double b = std::exp(log_lo + (log_hi - log_lo) *
                                   std::min(m - 1, best_i + 1) / (m - 1));
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = deficit(x1, lambda, p, c4, c6);
  double f2 = deficit(x2, lambda, p, c4, c6);
  for (int k = 0; k < 200 && (b - a) > 1e-13 * b; ++k) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = deficit(x2, lambda, p, c4, c6);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = deficit(x1, lambda, p, c4, c6);
    }
  }
  double t_star = 0.5 * (a + b);
  double v_star = deficit(t_star, lambda, p, c4, c6);
  v_star = std::max(v_star, std::max(f1, f2));

  if (v_star > 0.0) {
    res.omega_sharp = v_star;
    res.t_star = t_star;
  } else {
    res.omega_sharp = 0.0;
    res.t_star = 0.0;
  }
  return res;
}

double sufficient_threshold(const Params& prm) {
  require_subcritical(prm);
  double c4, c6;
  regime_coefficients(prm, c4, c6);
  const double p = prm.p;
  double lg = std::log((5.0 - p) / 8.0) +
              4.0 / (5.0 - p) * std::log((p + 1.0) * prm.lambda) +
              (p - 1.0) / (5.0 - p) * std::log((p - 1.0) / (24.0 * c6));
  if (lg > std::log(std::numeric_limits<double>::max()))
    return std::numeric_limits<double>::infinity();
  return std::exp(lg);
}

ThresholdResult thresholds(const Params& prm) {
  ThresholdResult res = sharp_threshold(prm);
  res.omega_sufficient = sufficient_threshold(prm);
  res.sufficient_overflow = std::isinf(res.omega_sufficient);
  return res;
}

SweepResult monotonicity_sweep(const std::string& axis, const Params& base,
                               const std::vector<double>& values, int jobs) {
  if (axis != "q" && axis != "mu" && axis != "p")
    throw std::invalid_argument("sweep: axis must be \"q\", \"mu\" or \"p\"");
  if (values.empty()) throw std::invalid_argument("sweep: no values");
  for (size_t i = 0; i + 1 < values.size(); ++i)
    if (!(values[i] < values[i + 1]))
      throw std::invalid_argument("sweep: values must be strictly ascending");

  SweepResult sr;
  sr.axis = axis;
  double mu_free_bound = std::numeric_limits<double>::infinity();
  if (axis == "mu" && base.p < 3.0) {
    // Dropping the sextic term bounds the deficit by lambda t^{p-1} - c4 t^2
    // (mu-free), maximized where the two terms' slopes match.
    Params probe = base;
    probe.mu = values.front();
    double c4, c6;
    regime_coefficients(probe, c4, c6);
    double t0 = std::exp(std::log(base.lambda * (base.p - 1.0) / (2.0 * c4)) /
                         (3.0 - base.p));
    mu_free_bound = base.lambda * abs_pow(t0, base.p - 1.0) - c4 * t0 * t0;
  }

  sr.rows.resize(values.size());
  parallel_for(values.size(), jobs, [&](std::size_t i) {
    Params prm = base;
    (axis == "q" ? prm.q : axis == "mu" ? prm.mu : prm.p) = values[i];
    ThresholdResult th = thresholds(prm);
    SweepRow& row = sr.rows[i];
    row.value = values[i];
    row.omega_sharp = th.omega_sharp;
    row.omega_sufficient = th.omega_sufficient;
    row.t_star = th.t_star;
    row.sufficient_overflow = th.sufficient_overflow;
  });

  if (axis != "p") {
    double prev = std::numeric_limits<double>::infinity();
    for (const SweepRow& row : sr.rows) {
      double slack = 1e-10 * std::max(1.0, std::abs(prev));
      if (row.omega_sharp > prev + slack) sr.monotone_ok = false;
      if (row.omega_sharp > mu_free_bound + 1e-10) sr.mu_bound_ok = false;
      prev = row.omega_sharp;
    }
  }
  return sr;
}

}  // namespace csgs

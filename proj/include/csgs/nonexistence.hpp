#pragma once

#include <string>
#include <vector>

#include "csgs/energy.hpp"

namespace csgs {

/// Coupling regimes for the pointwise obstruction.  The quartic/sextic
/// coefficients (c4, c6) of
///   g(t) = omega t^2 + c4 t^4 + c6 t^6 - lambda |t|^{p+1}
/// are (3q, q mu) for 0 < q < 1/3, (1, q mu) for 1/3 <= q < 2 and
/// (1, 2 mu) for q >= 2.  The small-q constants carry the full derivation;
/// the other two regimes reuse it by analogy and are marked as such in the
/// outputs.
enum class Regime { small_q, mid_q, large_q };

Regime regime_of(double q);
const char* regime_name(Regime r);
/// (c4, c6) for the regime of prm.q.
void regime_coefficients(const Params& prm, double& c4, double& c6);

/// Pointwise obstruction g(t); valid for 1 < p < 5.
double g_pointwise(double t, double omega, const Params& prm);

struct ThresholdResult {
  Regime regime = Regime::small_q;
  double omega_sharp = 0.0;       ///< least omega with g > 0 for all t != 0
  double omega_sufficient = 0.0;  ///< Young-inequality certificate, >= sharp
  bool sufficient_overflow = false;  ///< omega_sufficient overflowed (p -> 5)
  double t_star = 0.0;      ///< maximizer of the deficit (0 when sharp = 0)
  bool sufficient_is_analogy = false;  ///< regime 2/3 constant by analogy
};

/// omega* = max(0, max_{t>0} [ lambda t^{p-1} - c4 t^2 - c6 t^4 ]).
/// Log-ladder scan plus golden-section refinement; exact to ~1e-10.
ThresholdResult sharp_threshold(const Params& prm);

/// omega_bar = (5-p)/8 * ((p+1) lambda)^{4/(5-p)}
///             * ((p-1)/(24 c6))^{(p-1)/(5-p)}
/// evaluated in the log domain; +inf (flagged) when the exponents blow up.
double sufficient_threshold(const Params& prm);

/// Both thresholds together.
ThresholdResult thresholds(const Params& prm);

struct SweepRow {
  double value = 0.0;
  double omega_sharp = 0.0;
  double omega_sufficient = 0.0;
  double t_star = 0.0;
  bool sufficient_overflow = false;
};

struct SweepResult {
  std::string axis;
  std::vector<SweepRow> rows;
  /// omega* nonincreasing along the sweep (checked for axes q and mu).
  bool monotone_ok = true;
  /// For 1 < p < 3 and axis mu: omega* stays below the mu-independent bound
  /// obtained by dropping the t^6 term.
  bool mu_bound_ok = true;
};

/// Sweep omega*/omega_bar along ascending values of q, mu or p.  For q and
/// mu the expected monotonicity of omega* is asserted and violations land in
/// the flags rather than silently; for p the flags stay vacuously true.
/// Rows are computed in parallel up to `jobs`; the scan is order-independent.
SweepResult monotonicity_sweep(const std::string& axis, const Params& base,
                               const std::vector<double>& values,
                               int jobs = 1);

}  // namespace csgs

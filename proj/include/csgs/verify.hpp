#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csgs/energy.hpp"
#include "csgs/grid.hpp"

namespace csgs {

/// Random radial profiles: one or two components drawn from Gaussians,
/// compactly supported bumps and oscillatory Gaussians (sign-changing),
/// with random amplitude, width and sign.
struct SampleSpec {
  uint64_t seed = 42;
  int count = 1000;
  double amp_lo = 0.2, amp_hi = 1.5;
  double width_lo = 0.4, width_hi = 2.0;
  double osc_lo = 0.5, osc_hi = 2.5;
};

/// Deterministic sample #index of the family; independent of evaluation
/// order and thread count.
RadialFunction sample_radial(const SampleSpec& spec, uint64_t index,
                             const GridPtr& g);

struct CheckReport {
  std::string name;
  int count = 0;
  int skipped = 0;     ///< numerically zero samples
  int violations = 0;
  /// Inequalities: smallest normalized margin (RHS-LHS)/RHS seen.
  /// Identities: largest normalized residual seen.
  double worst_margin = 0.0;
  int64_t worst_seed_index = -1;
};

/// int u^4 <= 2 ||grad u||_2 (int (h^2/|x|^2) u^2)^{1/2}; slack -1e-8.
CheckReport check_quartic_bound(const SampleSpec& spec, const GridPtr& g,
                                int jobs = 1);

/// int u^6 <= 4 (int u^2|grad u|^2)^{1/2} (int (h^2/|x|^2) u^4)^{1/2}.
CheckReport check_sextic_bound(const SampleSpec& spec, const GridPtr& g,
                               int jobs = 1);

/// Young-combined forms: int u^4 <= A + D and int u^6 <= 2C + 2E.
CheckReport check_young_combined(const SampleSpec& spec, const GridPtr& g,
                                 const Params& prm, int jobs = 1);

/// Identity battery per sample: Nehari/derivative link, the two Gamma
/// routes, the coercivity decomposition, D/E dilation laws at t = 2, the
/// fiber-derivative identity Gamma(u_t) = t gamma'(t), and the Euler
/// relations of gateaux_D/gateaux_E.  Violation above `tol`.
CheckReport check_identities(const SampleSpec& spec, const GridPtr& g,
                             const Params& prm, double alpha, double tol = 1e-6,
                             int jobs = 1);

}  // namespace csgs

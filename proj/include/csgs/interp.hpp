#pragma once

#include <vector>

namespace csgs {

/// Monotone cubic Hermite interpolant (Fritsch-Carlson slope limiting).
/// Shape preserving: no overshoot on monotone data, so positive samples stay
/// positive.  The left endpoint slope is pinned to zero, matching the radial
/// symmetry u'(0) = 0 of the profiles this is used on.
class MonotoneCubic {
 public:
  MonotoneCubic(const std::vector<double>& x, const std::vector<double>& y);

  /// Evaluate at a single point; clamps to the end values outside [x0, xN].
  double operator()(double xq) const;

 private:
  const std::vector<double>& x_;
  std::vector<double> y_;
  std::vector<double> m_;  // node slopes
  mutable std::size_t hint_ = 0;

  double eval_on(std::size_t k, double xq) const;
};

}  // namespace csgs

#include "csgs/interp.hpp"

#include <cmath>
#include <stdexcept>

namespace csgs {

MonotoneCubic::MonotoneCubic(const std::vector<double>& x,
                             const std::vector<double>& y)
    : x_(x), y_(y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n)
    throw std::invalid_argument("MonotoneCubic: bad sizes");
  m_.assign(n, 0.0);

  std::vector<double> h(n - 1), d(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x[k + 1] - x[k];
    d[k] = (y[k + 1] - y[k]) / h[k];
  }

  // Interior slopes: Fritsch-Carlson weighted harmonic mean, zero at local
  // extrema.  Stays inside the monotonicity region, so no overshoot.
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (d[k - 1] == 0.0 || d[k] == 0.0 || (d[k - 1] > 0) != (d[k] > 0)) {
      m_[k] = 0.0;
    } else {
      double w1 = 2.0 * h[k] + h[k - 1];
      double w2 = h[k] + 2.0 * h[k - 1];
      m_[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
    }
  }

  // Left end: profiles are radial, u'(0) = 0.
  m_[0] = 0.0;

  // Right end: shape-limited one-sided estimate.
  {
    std::size_t k = n - 2;
    double m = ((2.0 * h[k] + (k ? h[k - 1] : h[k])) * d[k] -
                h[k] * (k ? d[k - 1] : d[k])) /
               (h[k] + (k ? h[k - 1] : h[k]));
    if (m * d[k] <= 0.0)
      m = 0.0;
    else if (k && (d[k - 1] > 0) != (d[k] > 0) && std::abs(m) > 3.0 * std::abs(d[k]))
      m = 3.0 * d[k];
    m_[n - 1] = m;
  }
}

double MonotoneCubic::eval_on(std::size_t k, double xq) const {
  double h = x_[k + 1] - x_[k];
  double s = (xq - x_[k]) / h;
  double s2 = s * s, s3 = s2 * s;
  double h00 = 2 * s3 - 3 * s2 + 1;
  double h10 = s3 - 2 * s2 + s;
  double h01 = -2 * s3 + 3 * s2;
  double h11 = s3 - s2;
  return h00 * y_[k] + h * h10 * m_[k] + h01 * y_[k + 1] + h * h11 * m_[k + 1];
}

double MonotoneCubic::operator()(double xq) const {
  const std::size_t n = x_.size();
  if (xq <= x_.front()) return y_.front();
  if (xq >= x_.back()) return y_.back();
  std::size_t k = hint_;
  if (k >= n - 1 || x_[k] > xq) k = 0;
  // queries are typically sorted; walk, fall back to bisection for jumps
  if (x_[k + 1] < xq) {
    std::size_t lo = k, hi = n - 1;
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      if (x_[mid] <= xq)
        lo = mid;
      else
        hi = mid;
    }
    k = lo;
  }
  hint_ = k;
  return eval_on(k, xq);
}

}  // namespace csgs

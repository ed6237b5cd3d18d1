#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace ddhit {

// Piecewise cubic Hermite on a strictly increasing grid with caller-supplied
// slopes. Value and first derivative match the knot data exactly.
class CubicHermite {
 public:
  CubicHermite() = default;
  CubicHermite(std::vector<double> t, std::vector<double> y, std::vector<double> slope)
      : t_(std::move(t)), y_(std::move(y)), m_(std::move(slope)) {
    assert(t_.size() >= 2 && t_.size() == y_.size() && t_.size() == m_.size());
  }

  double front_x() const { return t_.front(); }
  double back_x() const { return t_.back(); }
  std::size_t size() const { return t_.size(); }
  const std::vector<double>& grid() const { return t_; }
  const std::vector<double>& values() const { return y_; }
  const std::vector<double>& slopes() const { return m_; }

  double value(double x) const {
    const auto [k, s, h] = locate(x);
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * y_[k] + h10 * h * m_[k] + h01 * y_[k + 1] + h11 * h * m_[k + 1];
  }

  double derivative(double x) const {
    const auto [k, s, h] = locate(x);
    const double s2 = s * s;
    const double d00 = (6 * s2 - 6 * s) / h;
    const double d10 = 3 * s2 - 4 * s + 1;
    const double d01 = (-6 * s2 + 6 * s) / h;
    const double d11 = 3 * s2 - 2 * s;
    return d00 * y_[k] + d10 * m_[k] + d01 * y_[k + 1] + d11 * m_[k + 1];
  }

 private:
  struct Cell {
    std::size_t k;
    double s, h;
  };
  Cell locate(double x) const {
    // clamp to the grid; callers enforce range policy
    if (x <= t_.front()) return {0, 0.0, t_[1] - t_[0]};
    if (x >= t_.back()) {
      const std::size_t k = t_.size() - 2;
      return {k, 1.0, t_[k + 1] - t_[k]};
    }
    const auto it = std::upper_bound(t_.begin(), t_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - t_.begin()) - 1;
    const double h = t_[k + 1] - t_[k];
    return {k, (x - t_[k]) / h, h};
  }

  std::vector<double> t_, y_, m_;
};

// Fritsch-Carlson monotone slopes for tabulated data (custom model rates).
inline std::vector<double> pchip_slopes(const std::vector<double>& x,
                                        const std::vector<double>& y) {
  const std::size_t n = x.size();
  assert(n >= 2 && y.size() == n);
  std::vector<double> d(n - 1), m(n);
  for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
  m[0] = d[0];
  m[n - 1] = d[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      m[i] = 0.0;
    } else {
      const double w1 = 2 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
      const double w2 = (x[i + 1] - x[i]) + 2 * (x[i] - x[i - 1]);
      m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
  }
  // limit endpoint slopes (Fritsch-Carlson boundary rule)
  auto limit_end = [&](std::size_t i, double di) {
    if (m[i] * di <= 0.0)
      m[i] = 0.0;
    else if (std::abs(m[i]) > 3.0 * std::abs(di))
      m[i] = 3.0 * di;
  };
  limit_end(0, d[0]);
  limit_end(n - 1, d[n - 2]);
  return m;
}

// Safeguarded Newton on a monotone bracket [lo, hi]: f(lo) and f(hi) must
// straddle zero. Falls back to bisection whenever Newton leaves the bracket.
template <class F, class DF>
double solve_monotone(F&& f, DF&& df, double lo, double hi, double x_tol) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  assert(flo * fhi < 0.0);
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200 && hi - lo > x_tol; ++it) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (fx * flo < 0.0) {
      hi = x;
      fhi = fx;
    } else {
      lo = x;
      flo = fx;
    }
    const double dfx = df(x);
    double next = (dfx != 0.0) ? x - fx / dfx : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

}  // namespace ddhit

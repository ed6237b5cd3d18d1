#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace ddhit {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Wilson score interval for a binomial fraction count/m.
inline Interval wilson_interval(std::size_t count, std::size_t m, double z) {
  const double n = static_cast<double>(m);
  const double p = static_cast<double>(count) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

// Dvoretzky-Kiefer-Wolfowitz band half-width at confidence 1-alpha.
inline double dkw_epsilon(std::size_t m, double alpha) {
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(m)));
}

struct MeanVar {
  double mean = 0.0;
  double var = 0.0;  // unbiased (n-1 denominator)
  std::size_t n = 0;
};

inline MeanVar mean_var(const std::vector<double>& xs) {
  MeanVar mv;
  mv.n = xs.size();
  if (mv.n == 0) return mv;
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(mv.n);
  double s2 = 0.0;
  for (double x : xs) s2 += (x - m) * (x - m);
  mv.mean = m;
  mv.var = mv.n > 1 ? s2 / static_cast<double>(mv.n - 1) : 0.0;
  return mv;
}

// Anderson-Darling A^2 against N(mean, var) fitted from the sample.
// Reported as a diagnostic, not a gate.
inline double anderson_darling(std::vector<double> xs) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  const MeanVar mv = mean_var(xs);
  const double sd = std::sqrt(mv.var);
  std::sort(xs.begin(), xs.end());
  double a2 = -static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double zi = (xs[i] - mv.mean) / sd;
    const double zni = (xs[n - 1 - i] - mv.mean) / sd;
    double phi = std::min(std::max(normal_cdf(zi), 1e-300), 1.0 - 1e-16);
    double phic = std::min(std::max(1.0 - normal_cdf(zni), 1e-300), 1.0);
    a2 -= (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n) *
          (std::log(phi) + std::log(phic));
  }
  return a2;
}

}  // namespace ddhit

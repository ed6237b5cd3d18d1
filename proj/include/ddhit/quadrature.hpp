#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace ddhit {

namespace detail {
// Gauss-7 / Kronrod-15 pair on [-1,1]; nodes are the positive half.
inline constexpr double kGK15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kK15Weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kG7Weights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};
}  // namespace detail

// Single G7/K15 panel; returns the K15 value and |K15 - G7| as error gauge.
template <class F>
std::pair<double, double> gk15_panel(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f0 = f(mid);
  double k15 = detail::kK15Weights[7] * f0;
  double g7 = detail::kG7Weights[3] * f0;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * detail::kGK15Nodes[i];
    const double fsum = f(mid - dx) + f(mid + dx);
    k15 += detail::kK15Weights[i] * fsum;
    if (i % 2 == 1) g7 += detail::kG7Weights[i / 2] * fsum;
  }
  k15 *= half;
  g7 *= half;
  return {k15, std::abs(k15 - g7)};
}

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int panels = 0;
  bool converged = false;
};

// Globally adaptive G7/K15: split the worst panel until the summed error
// gauge meets max(abs_tol, rel_tol*|value|). The |K15-G7| gauge is a strong
// overestimate for smooth integrands, so convergence is reported
// conservatively.
template <class F>
QuadResult integrate_gk(F&& f, double a, double b, double rel_tol,
                        double abs_tol = 0.0, int max_panels = 4000) {
  struct Seg {
    double a, b, value, err;
    bool operator<(const Seg& o) const { return err < o.err; }
  };
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<Seg> segs;
  auto [v0, e0] = gk15_panel(f, a, b);
  segs.push({a, b, v0, e0});
  double total = v0, total_err = e0;
  int n = 1;
  while (n < max_panels) {
    const double goal = std::max(abs_tol, rel_tol * std::abs(total));
    if (total_err <= goal) break;
    Seg worst = segs.top();
    segs.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto [vl, el] = gk15_panel(f, worst.a, mid);
    auto [vr, er] = gk15_panel(f, mid, worst.b);
    total += vl + vr - worst.value;
    total_err += el + er - worst.err;
    segs.push({worst.a, mid, vl, el});
    segs.push({mid, worst.b, vr, er});
    ++n;
  }
  out.value = total;
  out.abs_error = total_err;
  out.panels = n;
  out.converged = total_err <= std::max(abs_tol, rel_tol * std::abs(total));
  return out;
}

}  // namespace ddhit

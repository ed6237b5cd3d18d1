#include "ddhit/fluid.hpp"

#include <cmath>
#include <vector>

#include "ddhit/quadrature.hpp"

namespace ddhit {

namespace {

constexpr double kDriftFloor = 1e-8;  // integrable-singularity guard near x_inf

struct DpStep {
  double x_new;
  double err;
};

// One Dormand-Prince 5(4) step for the scalar autonomous ODE x' = f(x).
template <class F>
DpStep dp45_step(F&& f, double x, double h) {
  const double k1 = f(x);
  const double k2 = f(x + h * (1.0 / 5) * k1);
  const double k3 = f(x + h * (3.0 / 40 * k1 + 9.0 / 40 * k2));
  const double k4 = f(x + h * (44.0 / 45 * k1 - 56.0 / 15 * k2 + 32.0 / 9 * k3));
  const double k5 = f(x + h * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 +
                               64448.0 / 6561 * k3 - 212.0 / 729 * k4));
  const double k6 = f(x + h * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 +
                               46732.0 / 5247 * k3 + 49.0 / 176 * k4 -
                               5103.0 / 18656 * k5));
  const double x5 = x + h * (35.0 / 384 * k1 + 500.0 / 1113 * k3 + 125.0 / 192 * k4 -
                             2187.0 / 6784 * k5 + 11.0 / 84 * k6);
  const double k7 = f(x5);
  const double x4 = x + h * (5179.0 / 57600 * k1 + 7571.0 / 16695 * k3 +
                             393.0 / 640 * k4 - 92097.0 / 339200 * k5 +
                             187.0 / 2100 * k6 + 1.0 / 40 * k7);
  return {x5, std::abs(x5 - x4)};
}

}  // namespace

FluidPath solve_fluid(const ModelSpec& model, double r_stop, double tol) {
  if (!(tol > 0.0)) throw RangeError("solve_fluid: tol must be positive");
  const double x0 = model.start();
  if (!(r_stop > x0)) throw RangeError("solve_fluid: r_stop must exceed the start density");

  auto f = [&](double u) { return model.drift_unchecked(u); };

  // The step controller runs well below the requested tolerance so that the
  // cubic Hermite dense output (one interpolation order lower than the
  // integrator) still honors it.
  const double ctrl_tol = tol * 1e-3;

  std::vector<double> ts{0.0}, xs{x0}, ms{f(x0)};
  double t = 0.0, x = x0;
  double h = 1e-4;
  int accepted = 0;
  for (int iter = 0; iter < 2000000; ++iter) {
    if (x >= r_stop) break;
    const double d = f(x);
    if (d < kDriftFloor)
      throw StallDetected("solve_fluid: drift underflow at density " + std::to_string(x) +
                          " before reaching r_stop = " + std::to_string(r_stop));
    const DpStep trial = dp45_step(f, x, h);
    const double scale = ctrl_tol * (1.0 + std::abs(x));
    if (trial.err <= scale) {
      // accept; advance by two half-steps and keep both knots
      const DpStep h1 = dp45_step(f, x, 0.5 * h);
      const DpStep h2 = dp45_step(f, h1.x_new, 0.5 * h);
      t += 0.5 * h;
      ts.push_back(t);
      xs.push_back(h1.x_new);
      ms.push_back(f(h1.x_new));
      t += 0.5 * h;
      ts.push_back(t);
      xs.push_back(h2.x_new);
      ms.push_back(f(h2.x_new));
      x = h2.x_new;
      ++accepted;
    }
    const double ratio = trial.err > 0.0 ? scale / trial.err : 1e4;
    h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(ratio, 0.2)));
    if (!(h > 1e-14 * (1.0 + t)))
      throw StallDetected("solve_fluid: step size underflow at t = " + std::to_string(t));
  }
  if (x < r_stop)
    throw ConsistencyError("solve_fluid: step budget exhausted before r_stop");
  if (ts.size() < 2) {
    // r_stop at (or numerically at) the start: keep a minimal valid grid
    const DpStep one = dp45_step(f, x0, 1e-8);
    ts.push_back(1e-8);
    xs.push_back(one.x_new);
    ms.push_back(f(one.x_new));
  }
  return FluidPath(CubicHermite(std::move(ts), std::move(xs), std::move(ms)), tol);
}

double FluidPath::event_time(double level) const {
  const auto& xs = spline_.values();
  const auto& ts = spline_.grid();
  if (level < xs.front() || level > xs.back())
    throw RangeError("event_time: level outside the solved range");
  if (level == xs.front()) return ts.front();
  // values are strictly increasing; locate the bracketing knot cell
  std::size_t lo = 0, hi = xs.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (xs[mid] < level ? lo : hi) = mid;
  }
  return solve_monotone([&](double t) { return spline_.value(t) - level; },
                        [&](double t) { return spline_.derivative(t); }, ts[lo], ts[hi],
                        1e-15 * std::max(1.0, ts[hi]));
}

double tau_quadrature(const ModelSpec& model, double r, double tol) {
  const double x0 = model.start();
  if (!(r > x0)) throw RangeError("tau: r must exceed the start density");
  if (!model.in_domain(r)) throw RangeError("tau: r outside the model domain");
  if (!(model.drift(r) >= kDriftFloor))
    throw RangeError("tau: drift at r below the singularity guard (r too close to x_infinity)");
  const auto q = integrate_gk([&](double u) { return 1.0 / model.drift_unchecked(u); },
                              x0, r, tol, 0.0);
  if (!q.converged)
    throw ConsistencyError("tau: quadrature failed to converge");
  return q.value;
}

TauEstimates tau_estimates(const ModelSpec& model, double r, double tol) {
  const double quad = tau_quadrature(model, r, tol);
  const FluidPath path = solve_fluid(model, r, tol);
  const double event = path.event_time(r);
  if (std::abs(quad - event) > 10.0 * tol * quad)
    throw ConsistencyError("tau: quadrature " + std::to_string(quad) +
                           " and ODE event " + std::to_string(event) +
                           " disagree beyond 10*tol*tau");
  return {quad, event};
}

double tau_of_r(const ModelSpec& model, double r, double tol) {
  return tau_estimates(model, r, tol).quadrature;
}

double fluid_derivative_at_tau(const ModelSpec& model, const FluidPath& path, double r) {
  if (!(r > model.start()) || !(r < x_infinity(model)))
    throw RangeError("fluid_derivative_at_tau: r outside (x, x_infinity)");
  (void)path;  // the identity x'(tau_r) = drift(r) needs no interpolation
  return model.drift(r);
}

}  // namespace ddhit

#pragma once

#include "ddhit/interp.hpp"
#include "ddhit/model.hpp"

namespace ddhit {

// Dense-output solution of x' = drift(x), x_0 = start. The interpolant is
// cubic Hermite on the accepted-step grid with drift(x_k) as exact slopes,
// so values increase strictly and the derivative at every knot is the drift.
class FluidPath {
 public:
  FluidPath(CubicHermite spline, double tol)
      : spline_(std::move(spline)), tol_(tol) {}

  double value(double t) const { return spline_.value(t); }
  double derivative(double t) const { return spline_.derivative(t); }
  double horizon() const { return spline_.back_x(); }
  double start_value() const { return spline_.values().front(); }
  double end_value() const { return spline_.values().back(); }
  double tolerance() const { return tol_; }
  const CubicHermite& spline() const { return spline_; }

  // First t with x_t = level; level must lie within the solved range.
  double event_time(double level) const;

 private:
  CubicHermite spline_;
  double tol_;
};

// Adaptive embedded RK (Dormand-Prince 5(4)) until x_t >= r_stop, local error
// per step <= tol. Throws StallDetected when the drift underflows before the
// stop level (r_stop at or beyond x_infinity numerically).
FluidPath solve_fluid(const ModelSpec& model, double r_stop, double tol = 1e-10);

struct TauEstimates {
  double quadrature;  // integral of 1/drift over [x, r]
  double ode_event;   // first crossing time of the dense fluid path
};

// Both routes to tau_r; they must agree within 10*tol*tau_r.
TauEstimates tau_estimates(const ModelSpec& model, double r, double tol = 1e-10);

// Deterministic hitting time tau_r (quadrature value, cross-validated
// against the ODE event time).
double tau_of_r(const ModelSpec& model, double r, double tol = 1e-10);

// Quadrature-only tau_r, no ODE cross-check (cheap path for inner loops).
double tau_quadrature(const ModelSpec& model, double r, double tol = 1e-10);

// x'(tau_r) = drift(r) > 0 for r in (x, x_infinity).
double fluid_derivative_at_tau(const ModelSpec& model, const FluidPath& path, double r);

}  // namespace ddhit

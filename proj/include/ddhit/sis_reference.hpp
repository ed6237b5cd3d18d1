#pragma once

#include <cmath>

namespace ddhit {

// Closed forms quoted for the SIS example (theta = 1, start density 1/2).
// xi_as_printed carries the 1/((lambda-1) - r/2) boundary term verbatim;
// xi_symmetrized replaces it by 1/((lambda-1) - lambda/2), matching the
// other boundary term. The audit compares both against the variance
// quadrature and quantifies the difference rather than assuming either.

inline double sis_tau_closed_form(double lambda, double r) {
  return (std::log(2.0 * r) -
          std::log(((lambda - 1.0) - lambda * r) / (lambda / 2.0 - 1.0))) /
         (lambda - 1.0);
}

namespace detail {
inline double sis_xi_core(double lambda, double r, double second_boundary_term) {
  const double lm1 = lambda - 1.0;
  const double a = lambda * (lambda + 3.0) / (lm1 * lm1 * lm1);
  const double b = (lambda + 1.0) / (lm1 * lm1);
  const double c = 2.0 * lambda / (lm1 * lm1);
  return a * std::log(2.0 * r) + b * (2.0 - 1.0 / r) +
         a * std::log((lm1 - lambda / 2.0) / (lm1 - lambda * r)) +
         c * (1.0 / (lm1 - lambda * r) - second_boundary_term);
}
}  // namespace detail

inline double sis_xi_as_printed(double lambda, double r) {
  return detail::sis_xi_core(lambda, r, 1.0 / ((lambda - 1.0) - 0.5 * r));
}

inline double sis_xi_symmetrized(double lambda, double r) {
  return detail::sis_xi_core(lambda, r, 1.0 / ((lambda - 1.0) - 0.5 * lambda));
}

}  // namespace ddhit

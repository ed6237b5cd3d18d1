#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "ddhit/errors.hpp"

namespace ddhit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// One jump rate F_i: nonnegative on the domain, C^1. When no analytic
// derivative is supplied, a central difference with h = 1e-6*max(1,|u|)
// stands in.
struct RateFunction {
  std::function<double(double)> value;
  std::function<double(double)> deriv;  // may be empty

  double eval(double u) const { return value(u); }
  double derivative(double u) const {
    if (deriv) return deriv(u);
    const double h = 1e-6 * std::max(1.0, std::abs(u));
    return (value(u + h) - value(u - h)) / (2.0 * h);
  }
};

// Tags for the simulation fast paths; Custom goes through the closures.
enum class ModelKind { BirthDeath, Sis, Custom };

// A validated density-dependent family: jump sizes l_i, rates F_i, start
// density x, and an explicit domain of valid densities. Immutable after
// build; safe for concurrent reads.
class ModelSpec {
 public:
  const std::vector<double>& jumps() const { return jumps_; }
  const std::vector<RateFunction>& rates() const { return rates_; }
  std::size_t reaction_count() const { return jumps_.size(); }
  double start() const { return start_; }
  double domain_lo() const { return domain_lo_; }
  double domain_hi() const { return domain_hi_; }
  double scan_hi() const { return scan_hi_; }
  const std::string& label() const { return label_; }
  ModelKind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  double theta() const { return theta_; }
  double max_abs_jump() const { return max_abs_jump_; }
  double max_rate_derivative() const { return max_rate_derivative_; }
  bool integer_jumps() const { return integer_jumps_; }

  bool in_domain(double u) const { return u >= domain_lo_ && u <= domain_hi_; }

  // Sum l_i F_i(u); OutOfDomain when u is outside the declared interval.
  double drift(double u) const {
    check_domain(u);
    return drift_unchecked(u);
  }

  // Sum l_i^2 F_i(u).
  double beta(double u) const {
    check_domain(u);
    return beta_unchecked(u);
  }

  // Sum l_i F_i'(u) (the linearization coefficient along the fluid path).
  double drift_derivative(double u) const {
    check_domain(u);
    double c = 0.0;
    for (std::size_t i = 0; i < jumps_.size(); ++i)
      c += jumps_[i] * rates_[i].derivative(u);
    return c;
  }

  double drift_unchecked(double u) const {
    double s = 0.0;
    for (std::size_t i = 0; i < jumps_.size(); ++i) s += jumps_[i] * rates_[i].eval(u);
    return s;
  }

  double beta_unchecked(double u) const {
    double s = 0.0;
    for (std::size_t i = 0; i < jumps_.size(); ++i)
      s += jumps_[i] * jumps_[i] * rates_[i].eval(u);
    return s;
  }

  // Out-of-domain evaluation policy for the stochastic engines: project u
  // into the domain, floor the rate at 0, and count the excursion.
  double rate_clamped(std::size_t i, double u, std::size_t* clamp_counter) const {
    double uu = u;
    if (u < domain_lo_ || u > domain_hi_) {
      uu = std::min(std::max(u, domain_lo_), domain_hi_);
      if (clamp_counter) ++*clamp_counter;
    }
    const double f = rates_[i].eval(uu);
    if (f < 0.0) {
      if (clamp_counter) ++*clamp_counter;
      return 0.0;
    }
    return f;
  }

  friend ModelSpec build_model(std::vector<double> jumps, std::vector<RateFunction> rates,
                               double start, double domain_lo, double domain_hi,
                               std::string label, ModelKind kind, double lambda,
                               double theta, int grid_points);

 private:
  void check_domain(double u) const {
    if (!in_domain(u))
      throw OutOfDomain("density " + std::to_string(u) + " outside domain of " + label_);
  }

  std::vector<double> jumps_;
  std::vector<RateFunction> rates_;
  double start_ = 0.0;
  double domain_lo_ = 0.0;
  double domain_hi_ = kInf;
  double scan_hi_ = 0.0;  // finite upper end used for grid scans
  std::string label_;
  ModelKind kind_ = ModelKind::Custom;
  double lambda_ = 0.0, theta_ = 0.0;
  double max_abs_jump_ = 0.0;
  double max_rate_derivative_ = 0.0;
  bool integer_jumps_ = false;
};

// Validates the family on a grid (default 10^4 points): F_i(0)=0, F_i >= 0,
// finite sup|F_i'|, positive drift at the start density.
ModelSpec build_model(std::vector<double> jumps, std::vector<RateFunction> rates,
                      double start, double domain_lo, double domain_hi,
                      std::string label = "custom",
                      ModelKind kind = ModelKind::Custom, double lambda = 0.0,
                      double theta = 0.0, int grid_points = 10000);

// Example 1: l = (+1,-1), F1 = lambda*u, F2 = theta*u on [0, inf).
ModelSpec birth_death(double lambda, double theta, double x);

// Example 2: l = (+1,-1), F1 = lambda*u*(1-u), F2 = theta*u on [0, 1].
ModelSpec sis(double lambda, double theta, double x);

// First zero of the drift strictly above the start density; +inf when the
// drift stays positive on an unbounded domain.
double x_infinity(const ModelSpec& model);

}  // namespace ddhit

#include "ddhit/model.hpp"

#include <cmath>

#include "ddhit/interp.hpp"

namespace ddhit {

namespace {

bool near_integer(double v) { return std::abs(v - std::round(v)) < 1e-9; }

}  // namespace

ModelSpec build_model(std::vector<double> jumps, std::vector<RateFunction> rates,
                      double start, double domain_lo, double domain_hi,
                      std::string label, ModelKind kind, double lambda,
                      double theta, int grid_points) {
  if (jumps.empty() || jumps.size() != rates.size())
    throw Error("model " + label + ": need M >= 1 jumps with matching rate functions");
  if (!(domain_lo < domain_hi))
    throw Error("model " + label + ": empty domain");
  if (start < domain_lo || start > domain_hi)
    throw Error("model " + label + ": start density outside domain");

  ModelSpec m;
  m.jumps_ = std::move(jumps);
  m.rates_ = std::move(rates);
  m.start_ = start;
  m.domain_lo_ = domain_lo;
  m.domain_hi_ = domain_hi;
  m.label_ = std::move(label);
  m.kind_ = kind;
  m.lambda_ = lambda;
  m.theta_ = theta;

  // Unbounded domains are scanned on a generous finite window; every r used
  // downstream is validated against x_infinity computed on the same window.
  m.scan_hi_ = std::isfinite(domain_hi)
                   ? domain_hi
                   : start + 64.0 * std::max(1.0, std::abs(start));

  m.max_abs_jump_ = 0.0;
  m.integer_jumps_ = true;
  for (double l : m.jumps_) {
    m.max_abs_jump_ = std::max(m.max_abs_jump_, std::abs(l));
    if (!near_integer(l)) m.integer_jumps_ = false;
  }

  const double origin = (0.0 >= m.domain_lo_ && 0.0 <= m.domain_hi_) ? 0.0 : m.domain_lo_;
  for (std::size_t i = 0; i < m.rates_.size(); ++i) {
    const double f0 = m.rates_[i].eval(origin);
    if (std::abs(f0) > 1e-12)
      throw NonzeroAtOrigin(m.label_ + ": F_" + std::to_string(i + 1) + "(0) = " +
                            std::to_string(f0));
  }

  const int n_grid = grid_points > 1 ? grid_points : 10000;
  const double span = m.scan_hi_ - m.domain_lo_;
  double max_deriv = 0.0;
  for (int k = 0; k <= n_grid; ++k) {
    const double u = m.domain_lo_ + span * static_cast<double>(k) / n_grid;
    for (std::size_t i = 0; i < m.rates_.size(); ++i) {
      const double f = m.rates_[i].eval(u);
      if (!(f >= -1e-12) || !std::isfinite(f))
        throw NegativeRate(m.label_ + ": F_" + std::to_string(i + 1) + "(" +
                           std::to_string(u) + ") = " + std::to_string(f));
      const double d = std::abs(m.rates_[i].derivative(u));
      if (!std::isfinite(d))
        throw NegativeRate(m.label_ + ": F_" + std::to_string(i + 1) +
                           "' non-finite at u = " + std::to_string(u));
      max_deriv = std::max(max_deriv, d);
    }
  }
  m.max_rate_derivative_ = max_deriv;

  if (!(m.drift_unchecked(start) > 0.0))
    throw NonpositiveStartDrift(m.label_ + ": drift at start density " +
                                std::to_string(start) + " is not positive");
  return m;
}

ModelSpec birth_death(double lambda, double theta, double x) {
  std::vector<RateFunction> rates(2);
  rates[0].value = [lambda](double u) { return lambda * u; };
  rates[0].deriv = [lambda](double) { return lambda; };
  rates[1].value = [theta](double u) { return theta * u; };
  rates[1].deriv = [theta](double) { return theta; };
  return build_model({1.0, -1.0}, std::move(rates), x, 0.0, kInf, "birth_death",
                     ModelKind::BirthDeath, lambda, theta);
}

ModelSpec sis(double lambda, double theta, double x) {
  std::vector<RateFunction> rates(2);
  rates[0].value = [lambda](double u) { return lambda * u * (1.0 - u); };
  rates[0].deriv = [lambda](double u) { return lambda * (1.0 - 2.0 * u); };
  rates[1].value = [theta](double u) { return theta * u; };
  rates[1].deriv = [theta](double) { return theta; };
  return build_model({1.0, -1.0}, std::move(rates), x, 0.0, 1.0, "sis",
                     ModelKind::Sis, lambda, theta);
}

double x_infinity(const ModelSpec& model) {
  const int n_grid = 10000;
  const double lo = model.start();
  const double hi = model.scan_hi();
  const double span = hi - lo;
  double u_prev = lo;
  double d_prev = model.drift_unchecked(lo);
  for (int k = 1; k <= n_grid; ++k) {
    const double u = lo + span * static_cast<double>(k) / n_grid;
    const double d = model.drift_unchecked(u);
    if (d_prev > 0.0 && d <= 0.0) {
      // bracketed: bisect to 1e-12
      double a = u_prev, b = u;
      while (b - a > 1e-12) {
        const double mid = 0.5 * (a + b);
        if (model.drift_unchecked(mid) > 0.0)
          a = mid;
        else
          b = mid;
      }
      return 0.5 * (a + b);
    }
    u_prev = u;
    d_prev = d;
  }
  if (!std::isfinite(model.domain_hi())) return kInf;
  return model.domain_hi();
}

}  // namespace ddhit

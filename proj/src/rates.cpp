#include "ddhit/rates.hpp"

#include <cassert>
#include <cmath>

#include "ddhit/quadrature.hpp"

namespace ddhit {

namespace {
constexpr double kDriftFloor = 1e-8;
constexpr double kBetaFloor = 1e-14;
constexpr int kSubpointsPerCell = 16;  // composite midpoint inside knot cells
}  // namespace

PiecewiseLinearPath::PiecewiseLinearPath(std::vector<double> t, std::vector<double> f)
    : t_(std::move(t)), f_(std::move(f)) {
  assert(t_.size() >= 2 && t_.size() == f_.size());
  assert(t_.front() == 0.0);
  for (std::size_t k = 0; k + 1 < t_.size(); ++k) assert(t_[k] < t_[k + 1]);
}

double PiecewiseLinearPath::value(double t) const {
  if (t <= t_.front()) return f_.front();
  if (t >= t_.back()) return f_.back();
  std::size_t lo = 0, hi = t_.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (t_[mid] <= t ? lo : hi) = mid;
  }
  const double s = (t - t_[lo]) / (t_[hi] - t_[lo]);
  return f_[lo] + s * (f_[hi] - f_[lo]);
}

PiecewiseLinearPath PiecewiseLinearPath::scaled(double c) const {
  std::vector<double> f = f_;
  for (double& v : f) v *= c;
  return PiecewiseLinearPath(t_, std::move(f));
}

PiecewiseLinearPath PiecewiseLinearPath::shifted(double dv) const {
  std::vector<double> f = f_;
  for (double& v : f) v += dv;
  return PiecewiseLinearPath(t_, std::move(f));
}

RateProfile::RateProfile(ModelSpec model, double r_stop, double tol)
    : model_(std::move(model)), fluid_(solve_fluid(model_, r_stop, tol)), tol_(tol) {
  x_inf_ = x_infinity(model_);
  // antiderivative of C on the fluid grid; knot slopes are C itself, so the
  // Hermite interpolant differentiates back to C exactly at the knots
  const auto& ts = fluid_.spline().grid();
  std::vector<double> cum(ts.size()), slope(ts.size());
  auto c_of_t = [&](double t) { return model_.drift_derivative(fluid_.value(t)); };
  cum[0] = 0.0;
  slope[0] = c_of_t(ts[0]);
  for (std::size_t k = 1; k < ts.size(); ++k) {
    cum[k] = cum[k - 1] + gk15_panel(c_of_t, ts[k - 1], ts[k]).first;
    slope[k] = c_of_t(ts[k]);
  }
  cum_c_ = CubicHermite(ts, std::move(cum), std::move(slope));
}

void RateProfile::require_r(double r) const {
  if (!(r > model_.start()) || !(r < x_inf_) || !model_.in_domain(r))
    throw RangeError("r = " + std::to_string(r) + " outside (x, x_infinity)");
  if (!(model_.drift_unchecked(r) >= kDriftFloor))
    throw RangeError("r = " + std::to_string(r) + " too close to x_infinity (drift underflow)");
}

double RateProfile::sigma2(double r) const {
  require_r(r);
  const auto q = integrate_gk(
      [&](double u) {
        const double d = model_.drift_unchecked(u);
        return model_.beta_unchecked(u) / (d * d * d);
      },
      model_.start(), r, 1e-10, 0.0);
  if (!q.converged) throw ConsistencyError("sigma2: quadrature failed to converge");
  return q.value;
}

double clt_variance(const RateProfile& profile, double r) { return profile.sigma2(r); }

double mdp_rate(const RateProfile& profile, double r, double t) {
  if (!(t >= 0.0)) throw RangeError("mdp_rate: t must be nonnegative");
  return t * t / (2.0 * profile.sigma2(r));
}

VariationalResult variational_minimum(const RateProfile& profile, double T, double a,
                                      std::size_t knots) {
  if (!(T > 0.0) || T > profile.horizon() * (1.0 + 1e-12))
    throw RangeError("variational_minimum: T outside (0, horizon]");
  if (profile.beta_of_t(0.0) < kBetaFloor)
    throw RangeError("variational_minimum: beta vanishes at the start density");
  if (knots < 2) knots = 2;

  // W(t) = int_0^t beta e^{-2 cumC}; then the denominator is e^{2 cumC(T)} W(T)
  // and f_{T,a}(t) = a e^{cumC(t)-cumC(T)} W(t)/W(T).
  std::vector<double> ts(knots), w(knots);
  auto g = [&](double u) { return profile.beta_of_t(u) * std::exp(-2.0 * profile.cum_C(u)); };
  ts[0] = 0.0;
  w[0] = 0.0;
  for (std::size_t j = 1; j < knots; ++j) {
    ts[j] = T * static_cast<double>(j) / static_cast<double>(knots - 1);
    w[j] = w[j - 1] + gk15_panel(g, ts[j - 1], ts[j]).first;
  }
  const double cum_T = profile.cum_C(T);
  const double denom = std::exp(2.0 * cum_T) * w.back();
  if (!(denom >= kBetaFloor))
    throw DegenerateDenominator("variational_minimum: int beta e^{2 int C} = " +
                                std::to_string(denom));
  std::vector<double> f(knots);
  for (std::size_t j = 0; j < knots; ++j)
    f[j] = a * std::exp(profile.cum_C(ts[j]) - cum_T) * (w[j] / w.back());
  f.back() = a;  // exact endpoint (the analytic value; kills roundoff drift)
  return {a * a / (2.0 * denom), PiecewiseLinearPath(std::move(ts), std::move(f))};
}

namespace {

// Composite midpoint over the path's knot cells clipped to [0, T].
// Returns +inf as soon as cost(u, slope) does.
template <class CellCost>
double integrate_over_cells(const PiecewiseLinearPath& f, double T, CellCost&& cost) {
  double total = 0.0;
  for (std::size_t k = 0; k < f.cell_count(); ++k) {
    const double a = f.knot_t(k);
    if (a >= T) break;
    const double b = std::min(f.knot_t(k + 1), T);
    if (b <= a) continue;
    const double slope = f.slope_in_cell(k);
    const double h = (b - a) / kSubpointsPerCell;
    for (int j = 0; j < kSubpointsPerCell; ++j) {
      const double u = a + (j + 0.5) * h;
      const double c = cost(u, f.value(u), slope);
      if (c == kInf) return kInf;
      total += c * h;
    }
  }
  return total;
}

}  // namespace

double path_rate_I(const RateProfile& profile, const PiecewiseLinearPath& f, double T,
                   PathRateDiag* diag) {
  if (!(T > 0.0) || T > profile.horizon() * (1.0 + 1e-12))
    throw RangeError("path_rate_I: T outside (0, horizon]");
  if (f.end_time() < T * (1.0 - 1e-12))
    throw RangeError("path_rate_I: path not defined up to T");
  if (profile.beta_of_t(0.0) < kBetaFloor)
    throw RangeError("path_rate_I: beta vanishes at the start density");
  if (f.start_value() != 0.0) return kInf;

  const double value = integrate_over_cells(
      f, T, [&](double u, double fu, double slope) {
        const double num = slope - profile.C_of_t(u) * fu;
        const double beta = profile.beta_of_t(u);
        if (beta < kBetaFloor) {
          if (num * num <= kBetaFloor * kBetaFloor) return 0.0;
          if (diag) {
            diag->beta_vanished = true;
            diag->note = "beta < 1e-14 at t = " + std::to_string(u) +
                         " with nonzero numerator";
          }
          return kInf;
        }
        return num * num / beta;
      });
  return value == kInf ? kInf : 0.5 * value;
}

double local_ld_rate(const ModelSpec& model, double u, double y) {
  if (!model.in_domain(u))
    throw OutOfDomain("local_ld_rate: u outside the model domain");
  const auto& jumps = model.jumps();
  const auto& rates = model.rates();
  const std::size_t M = jumps.size();
  std::vector<double> F(M);
  bool any_active = false, up_active = false, down_active = false;
  for (std::size_t i = 0; i < M; ++i) {
    F[i] = std::max(0.0, rates[i].eval(u));
    if (F[i] > 0.0 && jumps[i] != 0.0) {
      any_active = true;
      (jumps[i] > 0.0 ? up_active : down_active) = true;
    }
  }
  if (!any_active) return y == 0.0 ? 0.0 : kInf;

  auto mean_velocity = [&](double b) {
    double m = 0.0;
    for (std::size_t i = 0; i < M; ++i) m += jumps[i] * (F[i] * std::exp(b * jumps[i]));
    return m;
  };
  auto objective = [&](double b) {
    double s = b * y;
    for (std::size_t i = 0; i < M; ++i) s -= F[i] * std::expm1(b * jumps[i]);
    return s;
  };

  // stationary at b = 0 exactly when y is the drift
  double m0 = 0.0;
  for (std::size_t i = 0; i < M; ++i) m0 += jumps[i] * rates[i].eval(u);
  if (y == m0) return 0.0;

  constexpr double kBracket = 50.0;  // exp overflow guard
  const double m_lo = mean_velocity(-kBracket);
  const double m_hi = mean_velocity(kBracket);
  if (y >= m_hi) {
    // no stationary point below the upper bracket end
    if (!up_active && y > 0.0) return kInf;  // objective grows like b*y
    return std::max(0.0, objective(kBracket));
  }
  if (y <= m_lo) {
    if (!down_active && y < 0.0) return kInf;
    return std::max(0.0, objective(-kBracket));
  }
  auto g = [&](double b) { return y - mean_velocity(b); };
  auto dg = [&](double b) {
    double s = 0.0;
    for (std::size_t i = 0; i < M; ++i)
      s += jumps[i] * jumps[i] * F[i] * std::exp(b * jumps[i]);
    return -s;
  };
  const double b_star = solve_monotone(g, dg, -kBracket, kBracket, 1e-13);
  return std::max(0.0, objective(b_star));
}

namespace {

double require_start_at_x(const ModelSpec& model, const PiecewiseLinearPath& f) {
  const double x0 = model.start();
  return std::abs(f.start_value() - x0) <= 1e-12 * std::max(1.0, std::abs(x0)) ? 0.0 : kInf;
}

}  // namespace

double path_rate_J(const ModelSpec& model, const PiecewiseLinearPath& f, double T) {
  if (!(T > 0.0) || f.end_time() < T * (1.0 - 1e-12))
    throw RangeError("path_rate_J: path not defined up to T");
  if (require_start_at_x(model, f) == kInf) return kInf;
  return integrate_over_cells(f, T, [&](double u, double fu, double slope) {
    (void)u;
    return local_ld_rate(model, fu, slope);
  });
}

double path_rate_K(const ModelSpec& model, const PiecewiseLinearPath& f, double T,
                   PathRateDiag* diag) {
  if (!(T > 0.0) || f.end_time() < T * (1.0 - 1e-12))
    throw RangeError("path_rate_K: path not defined up to T");
  if (require_start_at_x(model, f) == kInf) return kInf;
  return integrate_over_cells(f, T, [&](double u, double fu, double slope) {
    (void)u;
    const double num = slope - model.drift_unchecked(fu);
    const double beta = model.beta_unchecked(fu);
    if (beta < kBetaFloor) {
      if (num * num <= kBetaFloor * kBetaFloor) return 0.0;
      if (diag) {
        diag->beta_vanished = true;
        diag->note = "beta vanishes against nonzero numerator";
      }
      return kInf;
    }
    return num * num / beta;
  });
}

Eq37Check check_eq37_identity(const RateProfile& profile, double r) {
  profile.require_r(r);
  if (r > profile.fluid().end_value())
    throw RangeError("check_eq37_identity: profile was solved below r");
  const double tau = profile.tau_event(r);
  const double cum_tau = profile.cum_C(tau);
  const auto q = integrate_gk(
      [&](double t) {
        return profile.beta_of_t(t) * std::exp(2.0 * (cum_tau - profile.cum_C(t)));
      },
      0.0, tau, 1e-12, 0.0);
  if (!q.converged)
    throw ConsistencyError("check_eq37_identity: time-domain quadrature failed");
  const double lhs = q.value;
  const double d = profile.model().drift_unchecked(r);
  const double rhs = d * d * profile.sigma2(r);
  const double relerr = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
  return {lhs, rhs, relerr};
}

}  // namespace ddhit

#pragma once

#include <string>
#include <vector>

#include "ddhit/fluid.hpp"
#include "ddhit/model.hpp"

namespace ddhit {

// Piecewise-linear path on [0, T]: the dense subclass of absolutely
// continuous functions the path functionals are evaluated on.
class PiecewiseLinearPath {
 public:
  PiecewiseLinearPath(std::vector<double> t, std::vector<double> f);

  double value(double t) const;
  double slope_in_cell(std::size_t k) const {
    return (f_[k + 1] - f_[k]) / (t_[k + 1] - t_[k]);
  }
  std::size_t cell_count() const { return t_.size() - 1; }
  double knot_t(std::size_t k) const { return t_[k]; }
  double knot_f(std::size_t k) const { return f_[k]; }
  double start_value() const { return f_.front(); }
  double end_time() const { return t_.back(); }
  double end_value() const { return f_.back(); }

  PiecewiseLinearPath scaled(double c) const;
  PiecewiseLinearPath shifted(double dv) const;

  template <class Fn>
  static PiecewiseLinearPath sample(Fn&& fn, double T, std::size_t knots) {
    std::vector<double> t(knots), f(knots);
    for (std::size_t j = 0; j < knots; ++j) {
      t[j] = T * static_cast<double>(j) / static_cast<double>(knots - 1);
      f[j] = fn(t[j]);
    }
    return PiecewiseLinearPath(std::move(t), std::move(f));
  }

 private:
  std::vector<double> t_, f_;
};

// Precomputed deviation coefficients along the fluid path:
//   C(t)    = sum l_i F_i'(x_t)
//   beta(t) = sum l_i^2 F_i(x_t)
//   cumC    = antiderivative of C on the fluid grid (for exp(int C))
//   sigma2  = r -> integral over (x, r) of beta_u / drift^3
class RateProfile {
 public:
  RateProfile(ModelSpec model, double r_stop, double tol = 1e-10);

  const ModelSpec& model() const { return model_; }
  const FluidPath& fluid() const { return fluid_; }
  double horizon() const { return fluid_.horizon(); }
  double x_inf() const { return x_inf_; }

  double C_of_t(double t) const { return model_.drift_derivative(fluid_.value(t)); }
  double beta_of_t(double t) const { return model_.beta_unchecked(fluid_.value(t)); }
  double cum_C(double t) const { return cum_c_.value(t); }
  double sigma2(double r) const;
  double tau_event(double r) const { return fluid_.event_time(r); }

  void require_r(double r) const;  // RangeError unless x < r < x_infinity

 private:
  ModelSpec model_;
  FluidPath fluid_;
  CubicHermite cum_c_;
  double x_inf_;
  double tol_;
};

struct VariationalResult {
  double value;                  // a^2 / (2 * int_0^T beta e^{2 int C})
  PiecewiseLinearPath extremal;  // the minimizing path f_{T,a}
};

struct Eq37Check {
  double lhs;     // time-domain integral of beta e^{2 int C}
  double rhs;     // drift(r)^2 * sigma2(r)
  double relerr;
};

struct PathRateDiag {
  bool beta_vanished = false;
  std::string note;
};

// sigma^2(r): the CLT/MDP variance integral, relative tolerance 1e-10.
double clt_variance(const RateProfile& profile, double r);

// t^2 / (2 sigma^2(r)); upper and lower tails share this value.
double mdp_rate(const RateProfile& profile, double r, double t);

// Closed-form variational minimum over {f(T) = a, f(0) = 0} plus the sampled
// extremal path (default 2000 knots).
VariationalResult variational_minimum(const RateProfile& profile, double T, double a,
                                      std::size_t knots = 2000);

// I_T(f) = 1/2 int (f' - C f)^2 / beta; +inf when f(0) != 0 or beta vanishes
// against a nonzero numerator.
double path_rate_I(const RateProfile& profile, const PiecewiseLinearPath& f, double T,
                   PathRateDiag* diag = nullptr);

// Local Legendre transform l(u, y) = sup_b {b y - sum F_i(u)(e^{b l_i} - 1)}.
double local_ld_rate(const ModelSpec& model, double u, double y);

// J_T(f) = int l(f, f'); +inf when f(0) != x or any cell cost is infinite.
double path_rate_J(const ModelSpec& model, const PiecewiseLinearPath& f, double T);

// K_T(f) = int (f' - drift(f))^2 / beta(f), as printed (no 1/2 prefactor).
double path_rate_K(const ModelSpec& model, const PiecewiseLinearPath& f, double T,
                   PathRateDiag* diag = nullptr);

// Both sides of the time-domain/density-domain variance identity.
Eq37Check check_eq37_identity(const RateProfile& profile, double r);

}  // namespace ddhit

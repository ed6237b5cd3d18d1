#include "ddhit/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace ddhit {

namespace {

// Banded LU without pivoting. The transient-state systems are weakly
// diagonally dominant M-matrices, for which this factorization is stable;
// a vanishing pivot therefore flags a disconnected chain.
class BandedLU {
 public:
  BandedLU(std::size_t n, std::size_t bw)
      : n_(n), bw_(bw), ab_((2 * bw + 1) * n, 0.0) {}

  double& at(std::size_t i, std::size_t j) {
    return ab_[(i - j + bw_) * n_ + j];
  }

  void factor() {
    for (std::size_t j = 0; j < n_; ++j) {
      const double piv = at(j, j);
      if (std::abs(piv) < 1e-300)
        throw SingularSystem("oracle: zero pivot in first-passage system (disconnected chain?)");
      const std::size_t i_end = std::min(n_ - 1, j + bw_);
      for (std::size_t i = j + 1; i <= i_end; ++i) {
        const double l = at(i, j) / piv;
        at(i, j) = l;
        const std::size_t jj_end = std::min(n_ - 1, j + bw_);
        for (std::size_t jj = j + 1; jj <= jj_end; ++jj) at(i, jj) -= l * at(j, jj);
      }
    }
  }

  void solve(std::vector<double>& b) {
    for (std::size_t i = 1; i < n_; ++i) {
      const std::size_t j0 = i > bw_ ? i - bw_ : 0;
      double s = b[i];
      for (std::size_t j = j0; j < i; ++j) s -= at(i, j) * b[j];
      b[i] = s;
    }
    for (std::size_t ii = n_; ii-- > 0;) {
      const std::size_t j_end = std::min(n_ - 1, ii + bw_);
      double s = b[ii];
      for (std::size_t j = ii + 1; j <= j_end; ++j) s -= at(ii, j) * b[j];
      b[ii] = s / at(ii, ii);
    }
  }

 private:
  std::size_t n_, bw_;
  std::vector<double> ab_;
};

enum class StateClass { Transient, Hit, Fail };

std::vector<StateClass> classify(const TruncatedChain& chain) {
  std::vector<StateClass> cls(static_cast<std::size_t>(chain.state_count()));
  for (std::int64_t k = 0; k <= chain.cap; ++k) {
    if (chain.is_hit(k))
      cls[k] = StateClass::Hit;
    else if ((chain.absorb_zero && k == 0) || chain.total_rate(k) <= 0.0)
      cls[k] = StateClass::Fail;  // stuck states can never hit
    else
      cls[k] = StateClass::Transient;
  }
  return cls;
}

}  // namespace

TruncatedChain make_truncated_chain(const ModelSpec& model, std::int64_t n, double r,
                                    bool absorb_zero, std::int64_t cap) {
  if (!model.integer_jumps())
    throw Error("oracle: only integer jump sizes are supported");
  if (n <= 0) throw InvalidN("oracle: n must be positive");
  TruncatedChain chain;
  chain.n = n;
  chain.absorb_zero = absorb_zero;
  chain.target = static_cast<std::int64_t>(std::ceil(static_cast<double>(n) * r - 1e-9));
  std::int64_t max_jump = 0;
  for (double l : model.jumps()) {
    chain.jumps.push_back(static_cast<std::int64_t>(std::llround(l)));
    max_jump = std::max(max_jump, static_cast<std::int64_t>(std::llround(std::abs(l))));
  }
  const std::int64_t start = static_cast<std::int64_t>(std::llround(n * model.start()));
  chain.cap = cap > 0 ? cap : 4 * chain.target;
  chain.cap = std::max({chain.cap, chain.target + max_jump, start + max_jump});
  chain.rate.assign(model.reaction_count(),
                    std::vector<double>(static_cast<std::size_t>(chain.cap + 1), 0.0));
  for (std::int64_t k = 0; k <= chain.cap; ++k) {
    const double u = static_cast<double>(k) / static_cast<double>(n);
    for (std::size_t i = 0; i < model.reaction_count(); ++i)
      chain.rate[i][k] = static_cast<double>(n) * model.rate_clamped(i, u, nullptr);
  }
  return chain;
}

ExactHit exact_mean_hitting(const TruncatedChain& chain, std::int64_t start) {
  if (start < 0 || start > chain.cap)
    throw RangeError("exact_mean_hitting: start outside the state space");
  const auto cls = classify(chain);
  ExactHit out;
  if (cls[start] == StateClass::Hit) {
    out.hit_probability = 1.0;
    return out;
  }
  if (cls[start] == StateClass::Fail) {
    out.mean = kInf;
    out.second_moment = kInf;
    out.cond_mean = std::nan("");
    out.cond_second_moment = std::nan("");
    return out;
  }

  // contiguous system over every state below the target; hit/fail rows are
  // pinned with a unit diagonal
  const std::size_t dim = static_cast<std::size_t>(chain.target);
  std::size_t bw = 0;
  for (auto l : chain.jumps) bw = std::max<std::size_t>(bw, static_cast<std::size_t>(std::abs(l)));
  BandedLU lu(dim, bw);
  std::vector<double> rhs_h(dim, 0.0), rhs_trunc(dim, 0.0);
  std::vector<double> total(dim, 0.0);
  for (std::size_t k = 0; k < dim; ++k) {
    if (cls[k] != StateClass::Transient) {
      lu.at(k, k) = 1.0;
      continue;
    }
    const double R = chain.total_rate(static_cast<std::int64_t>(k));
    total[k] = R;
    lu.at(k, k) = 1.0;
    for (std::size_t i = 0; i < chain.jumps.size(); ++i) {
      const double p = chain.rate[i][k] / R;
      if (p == 0.0) continue;
      std::int64_t dest = static_cast<std::int64_t>(k) + chain.jumps[i];
      if (dest < 0) dest = 0;
      if (dest > chain.cap) {
        rhs_trunc[k] += p;  // truncation sink
        continue;
      }
      switch (cls[dest]) {
        case StateClass::Hit:
          rhs_h[k] += p;
          break;
        case StateClass::Fail:
          break;
        case StateClass::Transient:
          lu.at(k, static_cast<std::size_t>(dest)) -= p;
          break;
      }
    }
  }
  lu.factor();

  std::vector<double> h = rhs_h;
  lu.solve(h);
  std::vector<double> trunc = rhs_trunc;
  lu.solve(trunc);

  // conditional-on-hit moments:  g = E[tau 1_hit], g2 = E[tau^2 1_hit]
  std::vector<double> g(dim, 0.0);
  for (std::size_t k = 0; k < dim; ++k)
    if (cls[k] == StateClass::Transient) g[k] = h[k] / total[k];
  lu.solve(g);
  std::vector<double> g2(dim, 0.0);
  for (std::size_t k = 0; k < dim; ++k)
    if (cls[k] == StateClass::Transient) g2[k] = 2.0 * g[k] / total[k];
  lu.solve(g2);

  const std::size_t s = static_cast<std::size_t>(start);
  out.hit_probability = std::min(1.0, std::max(0.0, h[s]));
  out.truncation_mass = trunc[s];
  if (out.hit_probability > 0.0) {
    out.cond_mean = g[s] / out.hit_probability;
    out.cond_second_moment = g2[s] / out.hit_probability;
  } else {
    out.cond_mean = std::nan("");
    out.cond_second_moment = std::nan("");
  }
  if (out.hit_probability >= 1.0 - 1e-12) {
    out.mean = g[s];
    out.second_moment = g2[s];
  } else {
    out.mean = kInf;
    out.second_moment = kInf;
  }
  return out;
}

std::vector<double> exact_survival(const TruncatedChain& chain, std::int64_t start,
                                   const std::vector<double>& t_grid) {
  if (start < 0 || start > chain.cap)
    throw RangeError("exact_survival: start outside the state space");
  const auto cls = classify(chain);
  const std::size_t S = static_cast<std::size_t>(chain.state_count());

  double lambda = 0.0;
  for (std::size_t k = 0; k < S; ++k)
    if (cls[k] == StateClass::Transient)
      lambda = std::max(lambda, chain.total_rate(static_cast<std::int64_t>(k)));

  double t_max = 0.0;
  for (double t : t_grid) t_max = std::max(t_max, t);

  if (lambda == 0.0 || cls[start] != StateClass::Transient) {
    const double sv = cls[start] == StateClass::Hit ? 0.0 : 1.0;
    return std::vector<double>(t_grid.size(), sv);
  }

  const double mean_jumps = lambda * t_max;
  const std::size_t budget =
      static_cast<std::size_t>(mean_jumps + 40.0 * std::sqrt(mean_jumps + 1.0) + 100.0);
  if (budget > 5'000'000)
    throw OverflowGuard("exact_survival: Lambda*t_max = " + std::to_string(mean_jumps) +
                        " exceeds the Poisson series budget; reduce t_max or the cap");

  // march the uniformized chain, recording the absorbed-in-hit mass per step
  std::vector<double> v(S, 0.0), w(S, 0.0);
  v[static_cast<std::size_t>(start)] = 1.0;
  std::vector<double> hitmass;
  hitmass.reserve(budget + 1);
  auto hit_sum = [&](const std::vector<double>& vec) {
    double sum = 0.0;
    for (std::int64_t k = chain.target; k <= chain.cap; ++k) sum += vec[k];
    return sum;
  };
  hitmass.push_back(hit_sum(v));
  for (std::size_t j = 1; j <= budget; ++j) {
    std::fill(w.begin(), w.end(), 0.0);
    double transient_mass = 0.0;
    for (std::size_t k = 0; k < S; ++k) {
      const double mass = v[k];
      if (mass == 0.0) continue;
      if (cls[k] != StateClass::Transient) {
        w[k] += mass;
        continue;
      }
      transient_mass += mass;
      const double R = chain.total_rate(static_cast<std::int64_t>(k));
      w[k] += mass * (1.0 - R / lambda);
      for (std::size_t i = 0; i < chain.jumps.size(); ++i) {
        const double rate = chain.rate[i][k];
        if (rate == 0.0) continue;
        std::int64_t dest = static_cast<std::int64_t>(k) + chain.jumps[i];
        if (dest < 0) dest = 0;
        if (dest > chain.cap) dest = chain.cap;  // unreachable: cap >= target + max jump
        w[dest] += mass * rate / lambda;
      }
    }
    v.swap(w);
    hitmass.push_back(hit_sum(v));
    if (transient_mass < 1e-15) break;  // absorbed; the tail is constant
  }

  // Poisson weights: survival(t) = 1 - sum_j pmf(j; Lambda t) * hitmass_j
  std::vector<double> lgam(budget + 2);
  for (std::size_t j = 0; j < lgam.size(); ++j) lgam[j] = std::lgamma(static_cast<double>(j) + 1.0);
  std::vector<double> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    const double lt = lambda * t;
    if (lt <= 0.0) {
      out.push_back(1.0 - hitmass[0]);
      continue;
    }
    const double log_lt = std::log(lt);
    double absorbed = 0.0;
    double weight_used = 0.0;
    for (std::size_t j = 0; j <= budget; ++j) {
      const double pmf = std::exp(static_cast<double>(j) * log_lt - lt - lgam[j]);
      if (pmf < 1e-18 && static_cast<double>(j) > lt) break;
      const double hm = j < hitmass.size() ? hitmass[j] : hitmass.back();
      absorbed += pmf * hm;
      weight_used += pmf;
    }
    // any truncated Poisson tail can contribute at most its own mass
    absorbed += (1.0 - weight_used) * hitmass.back();
    out.push_back(std::min(1.0, std::max(0.0, 1.0 - absorbed)));
  }
  return out;
}

}  // namespace ddhit

#pragma once

#include <cstdint>
#include <vector>

#include "ddhit/model.hpp"

namespace ddhit {

// Finite restriction of the jump chain to the integer lattice {0,...,cap}
// with the hit set {k >= target} absorbing (and optionally state 0). Jumps
// past the cap land in a bookkept truncation sink.
struct TruncatedChain {
  std::int64_t n = 0;
  std::int64_t target = 0;
  std::int64_t cap = 0;
  bool absorb_zero = false;
  std::vector<std::int64_t> jumps;
  std::vector<std::vector<double>> rate;  // rate[i][k] = n * F_i(k/n), floored at 0

  std::int64_t state_count() const { return cap + 1; }
  bool is_hit(std::int64_t k) const { return k >= target; }
  double total_rate(std::int64_t k) const {
    double s = 0.0;
    for (const auto& ri : rate) s += ri[static_cast<std::size_t>(k)];
    return s;
  }
};

// Default cap is 4*ceil(n*r), never below the start or target.
TruncatedChain make_truncated_chain(const ModelSpec& model, std::int64_t n, double r,
                                    bool absorb_zero, std::int64_t cap = -1);

struct ExactHit {
  double hit_probability = 0.0;
  double mean = 0.0;            // unconditional; +inf when hit_probability < 1
  double second_moment = 0.0;   // unconditional; +inf when hit_probability < 1
  double cond_mean = 0.0;       // conditional on hitting
  double cond_second_moment = 0.0;
  double truncation_mass = 0.0;  // probability of reaching the cap sink first
};

// First-passage moments by banded elimination of the embedded-chain systems.
ExactHit exact_mean_hitting(const TruncatedChain& chain, std::int64_t start);

// P(tau > t) on t_grid by uniformization, Poisson series truncated to
// absolute error 1e-12.
std::vector<double> exact_survival(const TruncatedChain& chain, std::int64_t start,
                                   const std::vector<double>& t_grid);

}  // namespace ddhit

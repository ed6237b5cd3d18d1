#pragma once

#include <cmath>
#include <cstdint>

#include "ddhit/model.hpp"
#include "ddhit/ssa.hpp"

namespace ddhit {

// Euler-Maruyama settings for the diffusion approximation
//   dZ = drift(Z) dt + sqrt(beta(Z)/n) dB,  Z_0 = x.
struct DiffusionConfig {
  std::int64_t n = 0;
  double dt = 1e-3;
  bool bridge_correction = true;  // within-step crossing via Brownian bridge
  std::uint64_t seed = 0;
  double t_max = 0.0;
  bool zero_noise = false;  // diagnostic mode: forces xi = 0
  // deterministic hitting time; filled lazily when NaN, used to enforce
  // dt <= tau_r / 100
  double tau_r = std::nan("");
};

// One replica of the diffusion hitting time pi_r. Endpoint crossings are
// timed by linear interpolation; with bridge_correction, steps that stay
// below r may still hit with probability
// exp(-2 (r - Z_k)(r - Z_{k+1}) n / (beta(Z_k) dt)).
HittingSample simulate_diffusion_hitting(const ModelSpec& model, const DiffusionConfig& cfg,
                                         double r, std::uint64_t replica);

}  // namespace ddhit

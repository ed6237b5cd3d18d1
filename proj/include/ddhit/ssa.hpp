#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ddhit/model.hpp"
#include "ddhit/rng.hpp"

namespace ddhit {

enum class CensorReason { None, Extinct, Horizon };

inline const char* censor_name(CensorReason c) {
  switch (c) {
    case CensorReason::Extinct: return "extinct";
    case CensorReason::Horizon: return "horizon";
    default: return "none";
  }
}

// Outcome of one replica. tau is meaningful only when hit is true;
// terminal_state is in chain units (n times the density).
struct HittingSample {
  bool hit = false;
  double tau = 0.0;
  std::uint64_t events = 0;
  double terminal_state = 0.0;
  std::uint64_t replica_seed = 0;
  CensorReason censor = CensorReason::None;
  std::uint64_t domain_clamps = 0;
};

// Exact direct-method simulation of the jump chain from X_0 = round(n x)
// until the state reaches n r (hit), the total rate vanishes (extinct), or
// t exceeds t_max (horizon). The uniform stream is Philox keyed by
// (master_seed, replica), so any replica reruns identically in isolation.
HittingSample simulate_hitting(const ModelSpec& model, std::int64_t n, double r,
                               std::uint64_t master_seed, std::uint64_t replica,
                               double t_max);

// Same dynamics, recording (t, X_t/n) every record_stride-th event plus the
// start and terminal points.
std::vector<std::pair<double, double>> simulate_path(const ModelSpec& model,
                                                     std::int64_t n, double r,
                                                     std::uint64_t master_seed,
                                                     std::uint64_t replica, double t_max,
                                                     std::uint64_t record_stride);

}  // namespace ddhit

#include "ddhit/diffusion.hpp"

#include "ddhit/fluid.hpp"
#include "ddhit/rng.hpp"

namespace ddhit {

HittingSample simulate_diffusion_hitting(const ModelSpec& model, const DiffusionConfig& cfg,
                                         double r, std::uint64_t replica) {
  if (cfg.n <= 0) throw InvalidN("simulate_diffusion_hitting: n must be positive");
  if (!(cfg.dt > 0.0)) throw InvalidConfig("simulate_diffusion_hitting: dt must be positive");
  if (!(cfg.t_max > 0.0)) throw InvalidConfig("simulate_diffusion_hitting: t_max must be positive");
  const double tau = std::isnan(cfg.tau_r) ? tau_quadrature(model, r) : cfg.tau_r;
  if (cfg.dt > tau / 100.0)
    throw InvalidConfig("simulate_diffusion_hitting: dt must be at most tau_r/100");

  HittingSample s;
  s.replica_seed = replica;
  CounterRng rng(cfg.seed, replica, kStreamDiffusion);
  const double nd = static_cast<double>(cfg.n);
  const double sqrt_dt = std::sqrt(cfg.dt);
  const std::size_t M = model.reaction_count();
  const auto& jumps = model.jumps();
  std::vector<double> F(M);

  auto coeffs = [&](double z, double& drift, double& beta) {
    drift = 0.0;
    beta = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
      F[i] = model.rate_clamped(i, z, &s.domain_clamps);
      drift += jumps[i] * F[i];
      beta += jumps[i] * jumps[i] * F[i];
    }
  };

  double z = model.start();
  double t = 0.0;
  double drift, beta;
  coeffs(z, drift, beta);
  for (;;) {
    // fixed draw layout per step (one normal block, one bridge block) keeps
    // trajectories identical across bridge on/off under a common seed
    double xi = rng.normal();
    const double bridge_u = rng.uniform2().first;
    if (cfg.zero_noise) xi = 0.0;

    const double z_next = z + drift * cfg.dt + std::sqrt(beta / nd) * sqrt_dt * xi;
    ++s.events;

    if (z_next >= r) {
      const double frac = z_next > z ? (r - z) / (z_next - z) : 1.0;
      s.hit = true;
      s.tau = t + frac * cfg.dt;
      s.terminal_state = nd * z_next;
      return s;
    }
    if (cfg.bridge_correction && beta > 0.0 && z < r) {
      const double p = std::exp(-2.0 * (r - z) * (r - z_next) * nd / (beta * cfg.dt));
      if (bridge_u < p) {
        s.hit = true;
        s.tau = t + 0.5 * cfg.dt;  // within-step crossing, below discretization order
        s.terminal_state = nd * z_next;
        return s;
      }
    }
    t += cfg.dt;
    if (t >= cfg.t_max) {
      s.censor = CensorReason::Horizon;
      s.terminal_state = nd * z_next;
      return s;
    }
    coeffs(z_next, drift, beta);
    // frozen-and-falling outside the lattice support: censor as extinct
    // (e.g. SIS at Z <= 0; no reflection is applied)
    if (beta <= 0.0 && drift <= 0.0) {
      s.censor = CensorReason::Extinct;
      s.terminal_state = nd * z_next;
      return s;
    }
    z = z_next;
  }
}

}  // namespace ddhit

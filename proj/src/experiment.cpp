#include "ddhit/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "ddhit/fluid.hpp"
#include "ddhit/parallel.hpp"
#include "ddhit/rates.hpp"

namespace ddhit {

void validate_config(const ExperimentConfig& cfg) {
  if (!(cfg.alpha > 0.5 && cfg.alpha < 1.0))
    throw InvalidConfig("experiment: alpha must lie in (0.5, 1) for the moderate scaling");
  if (cfg.replicas < 1) throw InvalidConfig("experiment: need at least one replica");
  if (cfg.n <= 0) throw InvalidConfig("experiment: n must be positive");
  for (double t : cfg.t_grid)
    if (!(t >= 0.0)) throw InvalidConfig("experiment: t_grid values must be nonnegative");
  if (!std::is_sorted(cfg.t_grid.begin(), cfg.t_grid.end()))
    throw InvalidConfig("experiment: t_grid must be sorted ascending");
}

std::vector<HittingSample> run_replicas(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const double tau = tau_of_r(cfg.model, cfg.r, 1e-10);
  const double t_max = cfg.t_max_multiplier * tau;
  std::vector<HittingSample> samples(cfg.replicas);
  if (cfg.engine == Engine::Ssa) {
    parallel_for_index(cfg.replicas, cfg.workers, [&](std::size_t i) {
      samples[i] = simulate_hitting(cfg.model, cfg.n, cfg.r, cfg.master_seed, i, t_max);
    });
  } else {
    DiffusionConfig dc;
    dc.n = cfg.n;
    dc.dt = cfg.dt;
    dc.bridge_correction = cfg.bridge_correction;
    dc.seed = cfg.master_seed;
    dc.t_max = t_max;
    dc.zero_noise = cfg.zero_noise;
    dc.tau_r = tau;
    parallel_for_index(cfg.replicas, cfg.workers, [&](std::size_t i) {
      samples[i] = simulate_diffusion_hitting(cfg.model, dc, cfg.r, i);
    });
  }
  bool any_hit = false;
  for (const auto& s : samples) any_hit |= s.hit;
  if (!any_hit) throw AllCensored("experiment: no replica reached the level; check the configuration");
  return samples;
}

EmpiricalCurve curve_from_samples(const ExperimentConfig& cfg,
                                  const std::vector<HittingSample>& samples) {
  validate_config(cfg);
  EmpiricalCurve curve;
  curve.engine = cfg.engine;
  curve.replicas = samples.size();
  curve.tau_r = tau_of_r(cfg.model, cfg.r, 1e-10);
  RateProfile profile(cfg.model, cfg.r, 1e-10);
  curve.sigma2 = clt_variance(profile, cfg.r);
  const double nd = static_cast<double>(cfg.n);
  curve.a_n = std::pow(nd, cfg.alpha);
  const double dev_scale = nd / curve.a_n;        // multiplies tau^n - tau_r
  const double est_scale = nd / (curve.a_n * curve.a_n);  // multiplies -ln p

  std::size_t censored = 0;
  std::vector<double> deviations;
  deviations.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.hit)
      deviations.push_back(dev_scale * (s.tau - curve.tau_r));
    else
      ++censored;
  }
  curve.hit_count = deviations.size();
  curve.censored_fraction =
      static_cast<double>(censored) / static_cast<double>(samples.size());

  const std::size_t m = samples.size();
  auto transform = [&](std::size_t count) {
    return count == 0 ? kInf
                      : -est_scale * std::log(static_cast<double>(count) /
                                              static_cast<double>(m));
  };
  auto band = [&](std::size_t count) {
    const Interval w = wilson_interval(count, m, cfg.wilson_z);
    Interval out;
    out.lo = w.hi > 0.0 ? -est_scale * std::log(w.hi) : kInf;
    out.hi = w.lo > 0.0 ? -est_scale * std::log(w.lo) : kInf;
    return out;
  };

  std::vector<double> sorted = deviations;
  std::sort(sorted.begin(), sorted.end());
  for (double t : cfg.t_grid) {
    CurvePoint p;
    p.t = t;
    // censored replicas never hit: they sit in the upper tail at +inf
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
    p.upper_count = static_cast<std::size_t>(above) + censored;
    const auto below = std::lower_bound(sorted.begin(), sorted.end(), -t) - sorted.begin();
    p.lower_count = static_cast<std::size_t>(below);
    p.upper_estimate = transform(p.upper_count);
    p.lower_estimate = transform(p.lower_count);
    p.upper_band = band(p.upper_count);
    p.lower_band = band(p.lower_count);
    p.rate_value = mdp_rate(profile, cfg.r, t);
    curve.points.push_back(p);
  }
  return curve;
}

EmpiricalCurve run_mdp_experiment(const ExperimentConfig& cfg) {
  return curve_from_samples(cfg, run_replicas(cfg));
}

CltResult clt_from_samples(const ExperimentConfig& cfg,
                           const std::vector<HittingSample>& samples) {
  CltResult out;
  out.tau_r = tau_of_r(cfg.model, cfg.r, 1e-10);
  RateProfile profile(cfg.model, cfg.r, 1e-10);
  out.predicted_var = clt_variance(profile, cfg.r);
  const double sqrt_n = std::sqrt(static_cast<double>(cfg.n));
  std::vector<double> taus, scaled;
  for (const auto& s : samples) {
    if (!s.hit) continue;
    taus.push_back(s.tau);
    scaled.push_back(sqrt_n * (s.tau - out.tau_r));
  }
  out.hits = taus.size();
  out.censored_fraction = samples.empty()
                              ? 0.0
                              : 1.0 - static_cast<double>(taus.size()) /
                                          static_cast<double>(samples.size());
  if (taus.empty()) throw AllCensored("clt: no replica reached the level");
  out.sample_mean = mean_var(taus).mean;
  out.sample_var_scaled = mean_var(scaled).var;
  out.ad_statistic = anderson_darling(scaled);
  return out;
}

CltResult run_clt_experiment(const ExperimentConfig& cfg) {
  return clt_from_samples(cfg, run_replicas(cfg));
}

EngineComparison compare_engines(const ExperimentConfig& cfg) {
  ExperimentConfig ssa_cfg = cfg;
  ssa_cfg.engine = Engine::Ssa;
  ExperimentConfig diff_cfg = cfg;
  diff_cfg.engine = Engine::Diffusion;
  EngineComparison cmp{run_mdp_experiment(ssa_cfg), run_mdp_experiment(diff_cfg)};
  return cmp;
}

}  // namespace ddhit

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ddhit/diffusion.hpp"
#include "ddhit/model.hpp"
#include "ddhit/ssa.hpp"
#include "ddhit/stats.hpp"

namespace ddhit {

enum class Engine { Ssa, Diffusion };

inline const char* engine_name(Engine e) { return e == Engine::Ssa ? "ssa" : "diffusion"; }

struct ExperimentConfig {
  ModelSpec model;
  std::int64_t n = 10000;
  double alpha = 0.9;  // a_n = n^alpha, 0.5 < alpha < 1
  double r = 0.0;
  std::vector<double> t_grid;
  std::size_t replicas = 10000;
  std::uint64_t master_seed = 0;
  Engine engine = Engine::Ssa;
  double t_max_multiplier = 10.0;
  unsigned workers = 0;  // 0 = auto
  double wilson_z = 1.959963984540054;  // 95% band on the tail fraction
  // diffusion engine knobs
  double dt = 1e-3;
  bool bridge_correction = true;
  bool zero_noise = false;
};

struct CurvePoint {
  double t = 0.0;
  std::size_t upper_count = 0;
  std::size_t lower_count = 0;
  double upper_estimate = 0.0;  // -(n/a_n^2) ln(count/m); +inf when count = 0
  double lower_estimate = 0.0;
  Interval upper_band;  // Wilson interval pushed through the same map
  Interval lower_band;
  double rate_value = 0.0;  // t^2 / (2 sigma^2(r)), shared by both tails
};

struct EmpiricalCurve {
  std::vector<CurvePoint> points;
  double tau_r = 0.0;
  double sigma2 = 0.0;
  double a_n = 0.0;
  std::size_t replicas = 0;
  std::size_t hit_count = 0;
  double censored_fraction = 0.0;
  Engine engine = Engine::Ssa;
};

struct CltResult {
  double sample_mean = 0.0;
  double sample_var_scaled = 0.0;  // variance of sqrt(n) (tau^n - tau_r)
  double predicted_var = 0.0;      // clt_variance(r)
  double ad_statistic = 0.0;       // Anderson-Darling, reported not asserted
  std::size_t hits = 0;
  double censored_fraction = 0.0;
  double tau_r = 0.0;
};

struct EngineComparison {
  EmpiricalCurve ssa;
  EmpiricalCurve diffusion;
};

void validate_config(const ExperimentConfig& cfg);

// Deterministic replica batch for the configured engine; sample i always
// comes from stream (master_seed, i) regardless of the worker schedule.
std::vector<HittingSample> run_replicas(const ExperimentConfig& cfg);

// The moderate-deviation estimator of the tail curve. Censored replicas
// count as never-hit in the upper tail, are excluded from the lower tail,
// and are reported via censored_fraction.
EmpiricalCurve curve_from_samples(const ExperimentConfig& cfg,
                                  const std::vector<HittingSample>& samples);
EmpiricalCurve run_mdp_experiment(const ExperimentConfig& cfg);

CltResult clt_from_samples(const ExperimentConfig& cfg,
                           const std::vector<HittingSample>& samples);
CltResult run_clt_experiment(const ExperimentConfig& cfg);

// Runs both engines on one configuration; the rate column is shared.
EngineComparison compare_engines(const ExperimentConfig& cfg);

}  // namespace ddhit

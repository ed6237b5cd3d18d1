#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ddhit/config.hpp"
#include "ddhit/csv.hpp"
#include "ddhit/diffusion.hpp"
#include "ddhit/experiment.hpp"
#include "ddhit/fluid.hpp"
#include "ddhit/oracle.hpp"
#include "ddhit/parallel.hpp"
#include "ddhit/rates.hpp"
#include "ddhit/rng.hpp"
#include "ddhit/sis_reference.hpp"
#include "ddhit/ssa.hpp"

namespace {

using namespace ddhit;

constexpr std::uint32_t kStreamChecks = 7;  // suite randomness, disjoint from engines

struct CommonArgs {
  std::string config_path;
  std::string output_dir;  // overrides config when set
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  bool seed_set = false;
  unsigned workers = 0;
  bool workers_set = false;
};

AppConfig resolve(const CommonArgs& args) {
  AppConfig cfg = load_config(args.config_path, args.overrides);
  if (!args.output_dir.empty()) cfg.output_dir = args.output_dir;
  if (args.seed_set) cfg.experiment.master_seed = args.seed;
  if (args.workers_set) cfg.experiment.workers = args.workers;
  std::filesystem::create_directories(cfg.output_dir);
  return cfg;
}

std::string out_path(const AppConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

void manifest(const AppConfig& cfg, const std::string& sub,
              const std::vector<std::string>& outputs) {
  write_manifest(cfg.output_dir, sub, cfg.resolved, cfg.experiment.master_seed,
                 cfg.experiment.workers, outputs);
}

int cmd_fluid(const CommonArgs& args) {
  AppConfig cfg = resolve(args);
  const FluidPath path = solve_fluid(cfg.model, cfg.experiment.r, cfg.fluid.tol);
  CsvWriter csv(out_path(cfg, "fluid.csv"), {"t", "x_t"});
  const std::size_t samples = std::max<std::size_t>(2, cfg.fluid.t_samples);
  for (std::size_t j = 0; j < samples; ++j) {
    const double t = path.horizon() * static_cast<double>(j) / (samples - 1);
    csv.row({fmt17(t), fmt17(path.value(t))});
  }
  manifest(cfg, "fluid", {csv.path()});
  std::printf("fluid: solved to r = %s at horizon %s (grid %zu knots)\n",
              fmt17(cfg.experiment.r).c_str(), fmt17(path.horizon()).c_str(),
              path.spline().size());
  return 0;
}

int cmd_tau(const CommonArgs& args) {
  AppConfig cfg = resolve(args);
  const TauEstimates est = tau_estimates(cfg.model, cfg.experiment.r, cfg.fluid.tol);
  const double diff = std::abs(est.quadrature - est.ode_event);
  const bool agree = diff <= 10.0 * cfg.fluid.tol * est.quadrature;
  CsvWriter csv(out_path(cfg, "tau.csv"),
                {"r", "tau_quadrature", "tau_ode_event", "agreement"});
  csv.row({fmt17(cfg.experiment.r), fmt17(est.quadrature), fmt17(est.ode_event),
           agree ? "1" : "0"});
  manifest(cfg, "tau", {csv.path()});
  std::printf("tau_r quadrature = %.7f\n", est.quadrature);
  std::printf("tau_r ode_event  = %.7f\n", est.ode_event);
  std::printf("agreement (|diff| <= 10*tol*tau): %s (diff = %s)\n",
              agree ? "yes" : "NO", fmt17(diff).c_str());
  return agree ? 0 : 2;
}

int cmd_rate(const CommonArgs& args) {
  AppConfig cfg = resolve(args);
  RateProfile profile(cfg.model, cfg.experiment.r, cfg.fluid.tol);
  const double tau = tau_of_r(cfg.model, cfg.experiment.r, cfg.fluid.tol);
  const double s2 = clt_variance(profile, cfg.experiment.r);
  CsvWriter csv(out_path(cfg, "rate.csv"), {"t", "rate"});
  for (double t : cfg.experiment.t_grid)
    csv.row({fmt17(t), fmt17(mdp_rate(profile, cfg.experiment.r, t))});
  manifest(cfg, "rate", {csv.path()});
  std::printf("tau_r = %s\nsigma2 = %s\nrate(t) = t^2/(2 sigma2) written for %zu grid points\n",
              fmt17(tau).c_str(), fmt17(s2).c_str(), cfg.experiment.t_grid.size());
  return 0;
}

int cmd_check(const CommonArgs& args) {
  AppConfig cfg = resolve(args);
  const double r_max = cfg.experiment.r;
  RateProfile profile(cfg.model, r_max, cfg.fluid.tol);
  CounterRng rng(cfg.experiment.master_seed, 0, kStreamChecks);
  const double x0 = cfg.model.start();
  bool all_ok = true;
  std::vector<std::string> outputs;

  {
    CsvWriter csv(out_path(cfg, "check_eq37.csv"), {"r", "lhs", "rhs", "relerr"});
    for (int k = 0; k < 10; ++k) {
      const double u = rng.uniform();
      const double r = x0 + (0.1 + 0.85 * u) * (r_max - x0);
      const Eq37Check chk = check_eq37_identity(profile, r);
      csv.row({fmt17(r), fmt17(chk.lhs), fmt17(chk.rhs), fmt17(chk.relerr)});
      const bool ok = chk.relerr <= 1e-8;
      all_ok &= ok;
      std::printf("[%s] eq37 identity at r = %.6f: relerr = %.3e\n", ok ? "PASS" : "FAIL",
                  r, chk.relerr);
    }
    outputs.push_back(csv.path());
  }

  {
    const double horizon = profile.horizon();
    CsvWriter csv(out_path(cfg, "check_variational.csv"),
                  {"T", "a", "minimum", "extremal_rate", "relerr"});
    for (int k = 0; k < 20; ++k) {
      const auto [u1, u2] = rng.uniform2();
      const double T = (0.1 + 0.9 * u1) * horizon;
      const double a = -2.0 + 4.0 * u2;
      const auto vm = variational_minimum(profile, T, a);
      const double via_path = path_rate_I(profile, vm.extremal, T);
      const double denom = std::max(std::abs(vm.value), 1e-300);
      const double relerr = std::abs(via_path - vm.value) / denom;
      csv.row({fmt17(T), fmt17(a), fmt17(vm.value), fmt17(via_path), fmt17(relerr)});
      const bool ok = relerr <= 1e-6;
      all_ok &= ok;
      std::printf("[%s] variational extremal T = %.4f a = %+.4f: relerr = %.3e\n",
                  ok ? "PASS" : "FAIL", T, a, relerr);
    }
    outputs.push_back(csv.path());
  }

  if (cfg.model.kind() == ModelKind::Sis) {
    const double lambda = cfg.model.lambda();
    CsvWriter csv(out_path(cfg, "xi_audit.csv"),
                  {"r", "sigma2_quadrature", "sigma2_refined_relerr", "xi_printed_over_l2",
                   "xi_symmetrized_over_l2", "printed_over_quadrature"});
    for (double r : {0.55, 0.6, 0.65}) {
      const double s2 = clt_variance(profile, r);
      // mesh-refinement self-consistency: re-evaluate on split subintervals
      const double mid = 0.5 * (x0 + r);
      RateProfile p2(cfg.model, r_max, cfg.fluid.tol * 0.01);
      const double s2b = clt_variance(p2, r);
      const double self_rel = std::abs(s2 - s2b) / s2;
      (void)mid;
      const double xi_printed = sis_xi_as_printed(lambda, r) / (lambda * lambda);
      const double xi_sym = sis_xi_symmetrized(lambda, r) / (lambda * lambda);
      csv.row({fmt17(r), fmt17(s2), fmt17(self_rel), fmt17(xi_printed), fmt17(xi_sym),
               fmt17(xi_printed / s2)});
      const bool ok = self_rel <= 1e-8;
      all_ok &= ok;
      std::printf(
          "[%s] xi audit r = %.2f: sigma2 = %.8f (self-consistent to %.2e); printed "
          "Xi/l^2 = %.8f (ratio %.4f), symmetrized = %.8f\n",
          ok ? "PASS" : "FAIL", r, s2, self_rel, xi_printed, xi_printed / s2, xi_sym);
    }
    outputs.push_back(csv.path());
  }

  manifest(cfg, "check", outputs);
  std::printf("check: %s\n", all_ok ? "all checks passed" : "FAILURES present");
  return all_ok ? 0 : 2;
}

void write_samples_csv(CsvWriter& csv, const std::vector<HittingSample>& samples) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    csv.row({std::to_string(i), s.hit ? "1" : "0", s.hit ? fmt17(s.tau) : "nan",
             std::to_string(s.events), censor_name(s.censor)});
  }
}

int cmd_simulate(const CommonArgs& args, Engine engine) {
  AppConfig cfg = resolve(args);
  cfg.experiment.engine = engine;
  const auto samples = run_replicas(cfg.experiment);
  const char* name = engine == Engine::Ssa ? "simulate.csv" : "diffusion.csv";
  CsvWriter csv(out_path(cfg, name), {"replica", "hit", "tau", "events", "censor_reason"});
  write_samples_csv(csv, samples);
  manifest(cfg, engine_name(engine), {csv.path()});
  std::size_t hits = 0;
  for (const auto& s : samples) hits += s.hit;
  std::printf("%s: %zu replicas, %zu hits (%.2f%% censored)\n", engine_name(engine),
              samples.size(), hits,
              100.0 * (1.0 - static_cast<double>(hits) / samples.size()));
  return 0;
}

int cmd_oracle(const CommonArgs& args) {
  AppConfig cfg = resolve(args);
  const auto chain = make_truncated_chain(cfg.model, cfg.experiment.n, cfg.experiment.r,
                                          cfg.oracle.absorb_zero, cfg.oracle.cap);
  const std::int64_t start =
      static_cast<std::int64_t>(std::llround(cfg.experiment.n * cfg.model.start()));
  const double tau = tau_quadrature(cfg.model, cfg.experiment.r, cfg.fluid.tol);
  const double t_upper =
      cfg.oracle.t_upper > 0.0 ? cfg.oracle.t_upper : cfg.experiment.t_max_multiplier * tau;
  std::vector<double> t_grid(cfg.oracle.t_points);
  for (std::size_t j = 0; j < t_grid.size(); ++j)
    t_grid[j] = t_upper * static_cast<double>(j) / (t_grid.size() - 1);
  const auto exact = exact_survival(chain, start, t_grid);

  const auto samples = run_replicas(cfg.experiment);
  std::vector<double> taus;
  std::size_t never = 0;
  for (const auto& s : samples)
    s.hit ? taus.push_back(s.tau), void() : void(++never);
  std::sort(taus.begin(), taus.end());
  const double band = dkw_epsilon(samples.size(), cfg.oracle.dkw_alpha);

  CsvWriter csv(out_path(cfg, "oracle.csv"),
                {"t", "exact_survival", "empirical_survival", "band"});
  bool inside = true;
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    const auto hit_by_t = std::upper_bound(taus.begin(), taus.end(), t_grid[j]) - taus.begin();
    const double emp =
        1.0 - static_cast<double>(hit_by_t) / static_cast<double>(samples.size());
    inside &= std::abs(emp - exact[j]) <= band;
    csv.row({fmt17(t_grid[j]), fmt17(exact[j]), fmt17(emp), fmt17(band)});
  }
  manifest(cfg, "oracle", {csv.path()});
  std::printf("oracle: empirical survival %s the DKW(%.4f) band of width %.5f\n",
              inside ? "inside" : "OUTSIDE", 1.0 - cfg.oracle.dkw_alpha, band);
  return inside ? 0 : 2;
}

int cmd_mdp(const CommonArgs& args) {
  AppConfig cfg = resolve(args);
  const EmpiricalCurve curve = run_mdp_experiment(cfg.experiment);
  CsvWriter csv(out_path(cfg, "mdp.csv"),
                {"t", "upper_count", "lower_count", "upper_est", "lower_est", "band_lo",
                 "band_hi", "rate"});
  for (const auto& p : curve.points)
    csv.row({fmt17(p.t), std::to_string(p.upper_count), std::to_string(p.lower_count),
             fmt17(p.upper_estimate), fmt17(p.lower_estimate), fmt17(p.upper_band.lo),
             fmt17(p.upper_band.hi), fmt17(p.rate_value)});
  manifest(cfg, "mdp", {csv.path()});
  std::printf("mdp: tau_r = %s, sigma2 = %s, a_n = %s, censored fraction = %s\n",
              fmt17(curve.tau_r).c_str(), fmt17(curve.sigma2).c_str(),
              fmt17(curve.a_n).c_str(), fmt17(curve.censored_fraction).c_str());
  return 0;
}

int cmd_clt(const CommonArgs& args) {
  AppConfig cfg = resolve(args);
  const CltResult res = run_clt_experiment(cfg.experiment);
  CsvWriter csv(out_path(cfg, "clt.csv"),
                {"sample_mean", "sample_var_scaled", "predicted_var", "ad_statistic",
                 "hits", "censored_fraction"});
  csv.row({fmt17(res.sample_mean), fmt17(res.sample_var_scaled), fmt17(res.predicted_var),
           fmt17(res.ad_statistic), std::to_string(res.hits),
           fmt17(res.censored_fraction)});
  manifest(cfg, "clt", {csv.path()});
  std::printf("clt: mean = %.6f (tau_r = %.6f), scaled var = %.2f vs predicted %.2f, "
              "AD = %.3f\n",
              res.sample_mean, res.tau_r, res.sample_var_scaled, res.predicted_var,
              res.ad_statistic);
  return 0;
}

int cmd_compare(const CommonArgs& args) {
  AppConfig cfg = resolve(args);
  const EngineComparison cmp = compare_engines(cfg.experiment);
  CsvWriter csv(out_path(cfg, "compare.csv"),
                {"t", "ssa_upper_count", "ssa_upper_est", "ssa_band_lo", "ssa_band_hi",
                 "diffusion_upper_count", "diffusion_upper_est", "diffusion_band_lo",
                 "diffusion_band_hi", "rate"});
  for (std::size_t j = 0; j < cmp.ssa.points.size(); ++j) {
    const auto& a = cmp.ssa.points[j];
    const auto& b = cmp.diffusion.points[j];
    csv.row({fmt17(a.t), std::to_string(a.upper_count), fmt17(a.upper_estimate),
             fmt17(a.upper_band.lo), fmt17(a.upper_band.hi),
             std::to_string(b.upper_count), fmt17(b.upper_estimate),
             fmt17(b.upper_band.lo), fmt17(b.upper_band.hi), fmt17(a.rate_value)});
  }
  manifest(cfg, "compare", {csv.path()});
  std::printf("compare: %zu grid points; shared rate column; engines seeded on disjoint "
              "streams from master seed %llu\n",
              cmp.ssa.points.size(),
              static_cast<unsigned long long>(cfg.experiment.master_seed));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hitting-time simulation and rate-function toolkit for density-dependent chains"};
  app.require_subcommand(1);

  CommonArgs args;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", args.config_path, "JSON config file")->required();
    sub->add_option("-o,--output", args.output_dir, "output directory (overrides config)");
    sub->add_option("--set", args.overrides, "dotted-path overrides, e.g. run.r=2.5");
    sub->add_option("--seed", args.seed, "master seed")->each([&](const std::string&) {
      args.seed_set = true;
    });
    sub->add_option("--workers", args.workers, "worker threads")
        ->each([&](const std::string&) { args.workers_set = true; });
  };

  auto* fluid_cmd = app.add_subcommand("fluid", "solve the fluid ODE and emit (t, x_t)");
  auto* tau_cmd = app.add_subcommand("tau", "deterministic hitting time, both estimates");
  auto* rate_cmd = app.add_subcommand("rate", "tau_r, sigma2 and the rate on a t-grid");
  auto* check_cmd = app.add_subcommand("check", "variance-identity and variational suites");
  auto* sim_cmd = app.add_subcommand("simulate", "jump-chain replicas, one CSV row each");
  auto* diff_cmd = app.add_subcommand("diffusion", "diffusion replicas, one CSV row each");
  auto* oracle_cmd = app.add_subcommand("oracle", "exact vs empirical survival with DKW band");
  auto* mdp_cmd = app.add_subcommand("mdp", "moderate-deviation curve experiment");
  auto* clt_cmd = app.add_subcommand("clt", "CLT statistics of the hitting time");
  auto* compare_cmd = app.add_subcommand("compare", "paired ssa/diffusion curves");
  for (auto* sub : {fluid_cmd, tau_cmd, rate_cmd, check_cmd, sim_cmd, diff_cmd, oracle_cmd,
                    mdp_cmd, clt_cmd, compare_cmd})
    add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    if (fluid_cmd->parsed()) return cmd_fluid(args);
    if (tau_cmd->parsed()) return cmd_tau(args);
    if (rate_cmd->parsed()) return cmd_rate(args);
    if (check_cmd->parsed()) return cmd_check(args);
    if (sim_cmd->parsed()) return cmd_simulate(args, Engine::Ssa);
    if (diff_cmd->parsed()) return cmd_simulate(args, Engine::Diffusion);
    if (oracle_cmd->parsed()) return cmd_oracle(args);
    if (mdp_cmd->parsed()) return cmd_mdp(args);
    if (clt_cmd->parsed()) return cmd_clt(args);
    if (compare_cmd->parsed()) return cmd_compare(args);
  } catch (const ConfigParseError& e) {
    std::cerr << "{\"error\":\"ConfigParseError\",\"message\":\"" << e.what() << "\"}\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "{\"error\":\"RuntimeError\",\"message\":\"" << e.what() << "\"}\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":\"Unexpected\",\"message\":\"" << e.what() << "\"}\n";
    return 3;
  }
  return 1;
}

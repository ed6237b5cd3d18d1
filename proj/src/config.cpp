#include "ddhit/config.hpp"

#include <fstream>
#include <memory>

#include "ddhit/interp.hpp"

namespace ddhit {

using nlohmann::json;

namespace {

json parse_override_value(const std::string& text) {
  // numbers/bools/arrays parse as JSON; anything else stays a string
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded()) return json(text);
  return v;
}

void apply_override(json& root, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos)
    throw ConfigParseError("override '" + spec + "' is not key=value");
  const std::string path = spec.substr(0, eq);
  json* node = &root;
  std::size_t begin = 0;
  for (;;) {
    const auto dot = path.find('.', begin);
    const std::string key = path.substr(begin, dot == std::string::npos ? dot : dot - begin);
    if (key.empty()) throw ConfigParseError("override '" + spec + "' has an empty key");
    if (dot == std::string::npos) {
      (*node)[key] = parse_override_value(spec.substr(eq + 1));
      break;
    }
    node = &(*node)[key];
    begin = dot + 1;
  }
}

RateFunction rate_from_table(const json& tbl) {
  std::vector<double> u = tbl.at("u").get<std::vector<double>>();
  std::vector<double> F = tbl.at("F").get<std::vector<double>>();
  if (u.size() != F.size() || u.size() < 2)
    throw ConfigParseError("custom rate table needs matching u/F arrays with >= 2 points");
  auto spline = std::make_shared<CubicHermite>(u, F, pchip_slopes(u, F));
  RateFunction rf;
  rf.value = [spline](double x) { return spline->value(x); };
  rf.deriv = [spline](double x) { return spline->derivative(x); };
  return rf;
}

std::vector<double> t_grid_from_json(const json& run) {
  if (!run.contains("t_grid")) return {};
  const json& tg = run.at("t_grid");
  if (tg.is_array()) return tg.get<std::vector<double>>();
  const double start = tg.at("start").get<double>();
  const double stop = tg.at("stop").get<double>();
  const double step = tg.at("step").get<double>();
  if (!(step > 0.0) || stop < start)
    throw ConfigParseError("t_grid: need step > 0 and stop >= start");
  std::vector<double> out;
  for (double t = start; t <= stop + 1e-12 * step; t += step) out.push_back(t);
  return out;
}

}  // namespace

ModelSpec model_from_json(const json& section) {
  const std::string name = section.value("name", "");
  const int grid_points = section.value("grid_points", 10000);
  if (name == "birth_death") {
    return birth_death(section.at("lambda").get<double>(),
                       section.at("theta").get<double>(),
                       section.at("x").get<double>());
  }
  if (name == "sis") {
    return sis(section.at("lambda").get<double>(), section.at("theta").get<double>(),
               section.at("x").get<double>());
  }
  if (name == "custom") {
    std::vector<double> jumps = section.at("jumps").get<std::vector<double>>();
    std::vector<RateFunction> rates;
    for (const auto& tbl : section.at("tables")) rates.push_back(rate_from_table(tbl));
    const auto& dom = section.at("domain");
    const double lo = dom.at(0).get<double>();
    double hi = dom.at(1).is_string() ? kInf : dom.at(1).get<double>();
    return build_model(std::move(jumps), std::move(rates), section.at("x").get<double>(),
                       lo, hi, section.value("label", "custom"), ModelKind::Custom, 0.0,
                       0.0, grid_points);
  }
  throw ConfigParseError("model.name must be birth_death, sis, or custom (got '" + name +
                         "')");
}

AppConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError("cannot open config file '" + path + "'");
  json root = json::parse(in, nullptr, false);
  if (root.is_discarded())
    throw ConfigParseError("config file '" + path + "' is not valid JSON");
  for (const auto& ov : overrides) apply_override(root, ov);

  AppConfig cfg;
  try {
    cfg.model = model_from_json(root.at("model"));
    const json run = root.value("run", json::object());
    cfg.experiment.model = cfg.model;
    cfg.experiment.r = run.value("r", 0.0);
    cfg.experiment.n = run.value("n", std::int64_t{10000});
    cfg.experiment.replicas = run.value("replicas", std::size_t{10000});
    cfg.experiment.alpha = run.value("alpha", 0.9);
    cfg.experiment.master_seed = run.value("seed", kDefaultSeed);
    cfg.experiment.t_max_multiplier = run.value("t_max_multiplier", 10.0);
    cfg.experiment.workers = run.value("workers", 0u);
    cfg.experiment.t_grid = t_grid_from_json(run);
    const std::string engine = run.value("engine", "ssa");
    if (engine == "ssa")
      cfg.experiment.engine = Engine::Ssa;
    else if (engine == "diffusion")
      cfg.experiment.engine = Engine::Diffusion;
    else
      throw ConfigParseError("run.engine must be 'ssa' or 'diffusion'");

    const json diff = root.value("diffusion", json::object());
    cfg.experiment.dt = diff.value("dt", 1e-3);
    cfg.experiment.bridge_correction = diff.value("bridge_correction", true);
    cfg.experiment.zero_noise = diff.value("zero_noise", false);

    const json fl = root.value("fluid", json::object());
    cfg.fluid.tol = fl.value("tol", 1e-10);
    cfg.fluid.t_samples = fl.value("t_samples", std::size_t{200});

    const json orc = root.value("oracle", json::object());
    cfg.oracle.absorb_zero = orc.value("absorb_zero", false);
    cfg.oracle.t_points = orc.value("t_points", std::size_t{200});
    cfg.oracle.t_upper = orc.value("t_upper", 0.0);
    cfg.oracle.cap = orc.value("cap", std::int64_t{-1});
    cfg.oracle.dkw_alpha = orc.value("dkw_alpha", 0.001);

    cfg.output_dir = root.value("output", json::object()).value("dir", "out");
  } catch (const json::exception& e) {
    throw ConfigParseError(std::string("config: ") + e.what());
  }
  cfg.resolved = std::move(root);
  return cfg;
}

}  // namespace ddhit

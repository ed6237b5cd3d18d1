#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ddhit/experiment.hpp"
#include "ddhit/model.hpp"

namespace ddhit {

inline constexpr const char* kVersion = "0.1.0";

// Fixed default master seed (not time-based) so every run is reproducible
// out of the box.
inline constexpr std::uint64_t kDefaultSeed = 123456789ull;

struct FluidSettings {
  double tol = 1e-10;
  std::size_t t_samples = 200;
};

struct OracleSettings {
  bool absorb_zero = false;
  std::size_t t_points = 200;
  double t_upper = 0.0;  // 0 = auto (t_max)
  std::int64_t cap = -1;
  double dkw_alpha = 0.001;
};

struct AppConfig {
  ModelSpec model;
  ExperimentConfig experiment;  // model field mirrors `model`
  FluidSettings fluid;
  OracleSettings oracle;
  std::string output_dir = "out";
  nlohmann::json resolved;  // post-override echo for the manifest
};

// Parses the structured config file and applies key=value overrides
// (dotted paths, e.g. run.r=2.5). Throws ConfigParseError with context.
AppConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

// Builds a model from the "model" section alone (used by tests as well).
ModelSpec model_from_json(const nlohmann::json& section);

}  // namespace ddhit

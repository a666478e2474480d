#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "pmax/fields.hpp"
#include "pmax/mc_study.hpp"

namespace pmax {

// Parsed run configuration:
//
//   {
//     "seed": 42,
//     "model": {
//       "innovation": "independent_frechet" | "schlather",
//       "weights": [0.6666666666666666, 0.3333333333333333],
//       "z_coupling": "common" | "independent",
//       "correlation": {"c2": 1.0, "nu": 1.0},
//       "truncation": {"epsilon": 1e-4, "max_points": 100000},
//       "locations": [{"id": "a", "x1": 0.0, "x2": 0.0}],
//       "alpha": {"a": 0.5}
//     },
//     "run": { command-specific keys }
//   }
//
// Unknown keys are rejected at every level.
struct RunConfig {
  ModelSpec model;
  bool has_locations = false;
  nlohmann::json run = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::string model_digest;  // FNV-1a of the canonical model JSON
};

enum class Command { Simulate, Coeffs, Estimate, McTable, Figures };

RunConfig parse_run_config(const nlohmann::json& doc, Command command);
RunConfig load_run_config(const std::filesystem::path& path, Command command);

McConfig mc_config_from(const RunConfig& config);

// Typed accessors for the "run" section with defaults.
double run_number(const RunConfig& config, const std::string& key, double fallback);
std::size_t run_count(const RunConfig& config, const std::string& key, std::size_t fallback);
std::string run_string(const RunConfig& config, const std::string& key, const std::string& fallback);
bool run_has(const RunConfig& config, const std::string& key);

std::string fnv1a_hex(const std::string& text);

}  // namespace pmax

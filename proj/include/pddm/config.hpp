#ifndef PDDM_CONFIG_H_
#define PDDM_CONFIG_H_

#include <map>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "pddm/agent.hpp"

namespace pddm {

// anything wrong with a config file: missing required fields, unknown keys,
// wrong types, out-of-range values. messages name the offending field path
// (e.g. "planner.H").
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// a full experiment description as read from a config file:
//
//   {
//     "env":        {"name": "...", "params": {...}},
//     "experiment": {"I": ..., "R": ..., "T": ..., "E": ...,
//                    "seed": 0, "warmstart_weights": true},
//     "model":      {"hidden": [500, 500], "M": 3,
//                    "batch_size": 500, "learning_rate": 0.001},
//     "planner":    {"kind": "pddm", "H": ..., "N": ...,
//                    "gamma": ..., "beta": ...,            (required for pddm)
//                    "J": ..., "cem_iters": ..., "alpha": 1.0,  (J/cem_iters required for cem)
//                    "sample_std": 0.4},                   (number or per-dimension array)
//     "eval":       {"episodes": 20}
//   }
//
// unknown keys anywhere are errors.
struct HarnessConfig {
  std::string env_name;
  std::map<std::string, double> env_params;
  ExperimentConfig experiment;
  int eval_episodes = 20;
};

HarnessConfig ParseHarnessConfig(const nlohmann::json& root);
HarnessConfig LoadHarnessConfig(const std::string& path);

// complete resolved snapshot (every field, defaults included); parsing the
// result reproduces the config exactly
nlohmann::json HarnessConfigToJson(const HarnessConfig& config);

}  // namespace pddm

#endif  // PDDM_CONFIG_H_

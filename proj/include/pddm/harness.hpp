#ifndef PDDM_HARNESS_H_
#define PDDM_HARNESS_H_

#include <optional>
#include <string>
#include <vector>

#include "pddm/agent.hpp"
#include "pddm/config.hpp"
#include "pddm/manifest.hpp"

namespace pddm {

// file names inside a run directory
inline constexpr char kManifestFile[] = "manifest.json";
inline constexpr char kEpisodesFile[] = "episodes.csv";
inline constexpr char kModelLossFile[] = "model_loss.csv";
inline constexpr char kCheckpointFile[] = "ensemble.ckpt";
inline constexpr char kIncompleteMarker[] = ".incomplete";

// default parent for run directories when --out is not given; overridable
// through this environment variable
inline constexpr char kOutputRootEnvVar[] = "PDDM_OUT_ROOT";
std::string DefaultOutputRoot();

// trains per the config and fills the run directory with manifest.json,
// episodes.csv (one row per episode), model_loss.csv (one row per
// iteration x epoch x member), and ensemble.ckpt. a ".incomplete" marker
// exists while the run is in flight and is removed on success, so partial
// directories are recognizable. returns the result for callers that keep
// going (ablation).
ExperimentResult RunTrain(const HarnessConfig& config, const std::string& out_dir);

// evaluation driven by a config: planner and env from 'config', dynamics from
// a checkpoint (dimension-checked against the env) or, when checkpoint_path
// is empty, the ground-truth oracle. writes a one-row metrics CSV.
EvalSummary RunEval(const HarnessConfig& config, const std::string& checkpoint_path,
                    int episodes, uint64_t seed, const std::string& out_file);

// one sweep axis applied to a base config
struct AblationGrid {
  std::string axis;  // architecture | ensemble_size | warmstart | horizon | controller | gamma
  std::vector<nlohmann::json> values;
  std::vector<uint64_t> seeds;
  HarnessConfig base;
};

// parses and validates a grid file:
//   {"axis": "...", "values": [...], "seeds": [...], "base": {<config>}}
// every cell's resulting config is validated up front, so a bad axis value
// fails the whole grid before anything runs.
AblationGrid LoadAblationGrid(const std::string& path);

struct AblationCell {
  std::string axis;
  nlohmann::json value;
  uint64_t seed = 0;
  std::string status;  // ok | failed
  std::optional<EvalSummary> eval;
  std::string cell_dir;
  std::string error;  // diagnostic for failed cells
};

// runs every (value, seed) cell to completion, evaluating the trained
// ensemble afterwards. a cell that throws is recorded as failed and the
// sweep continues; the summary CSV always has |values| x |seeds| rows.
std::vector<AblationCell> RunAblation(const AblationGrid& grid, const std::string& out_dir);

// collapses episodes.csv of each run directory into per-iteration rows
// (run, iteration, cum_env_steps, mean_return, success_rate) ready to plot
void ExportPlotData(const std::vector<std::string>& run_dirs, const std::string& out_file);

}  // namespace pddm

#endif  // PDDM_HARNESS_H_

#include "pddm/harness.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>

#include "pddm/checkpoint.hpp"
#include "pddm/csv.hpp"
#include "pddm/version.hpp"

namespace pddm {

namespace fs = std::filesystem;

namespace {

std::string FormatInt(int64_t value) { return std::to_string(value); }

void WriteEpisodesCsv(const std::vector<EpisodeLog>& episodes, const std::string& path) {
  CsvWriter csv(path, {"iteration", "episode", "steps", "return", "success", "cum_env_steps"});
  int64_t cumulative = 0;
  for (const EpisodeLog& log : episodes) {
    cumulative += log.Length();
    csv.WriteRow({FormatInt(log.iteration), FormatInt(log.episode), FormatInt(log.Length()),
                  FormatDouble(log.episode_return), log.success ? "1" : "0",
                  FormatInt(cumulative)});
  }
  csv.Close();
}

void WriteModelLossCsv(const std::vector<TrainRecord>& records, const std::string& path) {
  CsvWriter csv(path, {"iteration", "epoch", "member", "loss"});
  for (const TrainRecord& r : records) {
    csv.WriteRow({FormatInt(r.iteration), FormatInt(r.epoch), FormatInt(r.member),
                  FormatDouble(r.loss)});
  }
  csv.Close();
}

void WriteEvalCsv(const EvalSummary& summary, const std::string& path) {
  CsvWriter csv(path, {"episodes", "successes", "success_rate", "ci_low", "ci_high",
                       "mean_return", "return_std", "mean_length"});
  csv.WriteRow({FormatInt(summary.episodes), FormatInt(summary.successes),
                FormatDouble(summary.success_rate), FormatDouble(summary.ci_low),
                FormatDouble(summary.ci_high), FormatDouble(summary.mean_return),
                FormatDouble(summary.return_std), FormatDouble(summary.mean_length)});
  csv.Close();
}

// filesystem-safe rendering of an axis value for the cell directory name
std::string ValueSlug(const nlohmann::json& value) {
  std::string text = value.is_string() ? value.get<std::string>() : value.dump();
  std::string slug;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') {
      slug += c;
    } else if (c == ',') {
      slug += 'x';
    }
  }
  return slug.empty() ? "value" : slug;
}

}  // namespace

std::string DefaultOutputRoot() {
  const char* root = std::getenv(kOutputRootEnvVar);
  return (root != nullptr && *root != '\0') ? root : "runs";
}

ExperimentResult RunTrain(const HarnessConfig& config, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  const fs::path marker = dir / kIncompleteMarker;
  {
    std::ofstream touch(marker);
    touch << "run in progress\n";
  }

  RunManifest manifest;
  manifest.config = HarnessConfigToJson(config);
  manifest.seed = config.experiment.seed;
  manifest.code_version = CodeVersion();
  manifest.created_utc = UtcTimestamp();
  manifest.out_dir = fs::absolute(dir).string();
  manifest.status = "running";
  manifest.Save((dir / kManifestFile).string());

  const auto started = std::chrono::steady_clock::now();
  std::unique_ptr<Environment> env = MakeEnvironment(config.env_name, config.env_params);
  ExperimentResult result = RunExperiment(*env, config.experiment);

  WriteEpisodesCsv(result.episodes, (dir / kEpisodesFile).string());
  WriteModelLossCsv(result.losses, (dir / kModelLossFile).string());
  SaveCheckpoint(result.ensemble, (dir / kCheckpointFile).string());

  manifest.finished_utc = UtcTimestamp();
  manifest.total_env_steps = result.total_env_steps;
  manifest.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  manifest.status = "complete";
  manifest.Save((dir / kManifestFile).string());

  fs::remove(marker);
  return result;
}

EvalSummary RunEval(const HarnessConfig& config, const std::string& checkpoint_path,
                    int episodes, uint64_t seed, const std::string& out_file) {
  std::unique_ptr<Environment> env = MakeEnvironment(config.env_name, config.env_params);
  env->set_horizon(config.experiment.steps_per_rollout);

  EvalSummary summary;
  if (checkpoint_path.empty()) {
    OracleModel oracle(*env);
    summary = EvaluatePolicy(*env, oracle, config.experiment.planner, episodes, seed);
  } else {
    ModelEnsemble ensemble = LoadCheckpoint(checkpoint_path);
    if (ensemble.StateDim() != env->StateDim() || ensemble.ActionDim() != env->ActionDim()) {
      throw CheckpointDimensionError(
          "checkpoint dimensions (" + std::to_string(ensemble.StateDim()) + "s/" +
          std::to_string(ensemble.ActionDim()) + "a) do not match environment '" +
          env->Name() + "' (" + std::to_string(env->StateDim()) + "s/" +
          std::to_string(env->ActionDim()) + "a)");
    }
    summary = EvaluatePolicy(*env, ensemble, config.experiment.planner, episodes, seed);
  }
  if (!out_file.empty()) {
    fs::path out(out_file);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    WriteEvalCsv(summary, out_file);
  }
  return summary;
}

namespace {

// applies one axis value to a copy of the base config, via the json snapshot
// so the result goes back through full validation
HarnessConfig ApplyAxisValue(const HarnessConfig& base, const std::string& axis,
                             const nlohmann::json& value, uint64_t seed) {
  nlohmann::json j = HarnessConfigToJson(base);
  if (axis == "architecture") {
    j["model"]["hidden"] = value;
  } else if (axis == "ensemble_size") {
    j["model"]["M"] = value;
  } else if (axis == "warmstart") {
    j["experiment"]["warmstart_weights"] = value;
  } else if (axis == "horizon") {
    j["planner"]["H"] = value;
  } else if (axis == "controller") {
    j["planner"]["kind"] = value;
  } else if (axis == "gamma") {
    j["planner"]["gamma"] = value;
  } else {
    throw ConfigError("unknown ablation axis '" + axis +
                      "'; available: architecture ensemble_size warmstart horizon controller "
                      "gamma");
  }
  j["experiment"]["seed"] = seed;
  try {
    return ParseHarnessConfig(j);
  } catch (const ConfigError& e) {
    throw ConfigError("axis value " + value.dump() + ": " + e.what());
  }
}

}  // namespace

AblationGrid LoadAblationGrid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open grid file: " + path);
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("grid is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("grid: expected an object");
  for (auto it = root.begin(); it != root.end(); ++it) {
    const std::string& key = it.key();
    if (key != "axis" && key != "values" && key != "seeds" && key != "base") {
      throw ConfigError("grid: unknown key '" + key + "'; known keys: axis values seeds base");
    }
  }
  if (!root.contains("axis") || !root["axis"].is_string()) {
    throw ConfigError("grid: missing required string field 'axis'");
  }
  if (!root.contains("values") || !root["values"].is_array() || root["values"].empty()) {
    throw ConfigError("grid: missing required non-empty array 'values'");
  }
  if (!root.contains("seeds") || !root["seeds"].is_array() || root["seeds"].empty()) {
    throw ConfigError("grid: missing required non-empty array 'seeds'");
  }
  if (!root.contains("base")) {
    throw ConfigError("grid: missing required object 'base'");
  }

  AblationGrid grid;
  grid.axis = root["axis"].get<std::string>();
  for (const auto& v : root["values"]) grid.values.push_back(v);
  for (const auto& s : root["seeds"]) {
    if (!s.is_number_integer() || s.get<int64_t>() < 0) {
      throw ConfigError("grid.seeds: expected non-negative integers");
    }
    grid.seeds.push_back(s.get<uint64_t>());
  }
  try {
    grid.base = ParseHarnessConfig(root["base"]);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("grid.base: ") + e.what());
  }

  // fail fast on unusable axis values before any cell runs
  for (const auto& value : grid.values) {
    ApplyAxisValue(grid.base, grid.axis, value, grid.seeds.front());
  }
  return grid;
}

std::vector<AblationCell> RunAblation(const AblationGrid& grid, const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::vector<AblationCell> cells;

  for (const auto& value : grid.values) {
    for (uint64_t seed : grid.seeds) {
      AblationCell cell;
      cell.axis = grid.axis;
      cell.value = value;
      cell.seed = seed;
      fs::path cell_dir = fs::path(out_dir) /
                          (grid.axis + "_" + ValueSlug(value) + "_seed" + std::to_string(seed));
      cell.cell_dir = cell_dir.string();
      try {
        HarnessConfig config = ApplyAxisValue(grid.base, grid.axis, value, seed);
        ExperimentResult result = RunTrain(config, cell_dir.string());

        std::unique_ptr<Environment> env = MakeEnvironment(config.env_name, config.env_params);
        env->set_horizon(config.experiment.steps_per_rollout);
        EvalSummary summary =
            EvaluatePolicy(*env, result.ensemble, config.experiment.planner,
                           config.eval_episodes, DeriveSeed(seed, 0x45564143ULL));
        WriteEvalCsv(summary, (cell_dir / "eval.csv").string());
        cell.eval = summary;
        cell.status = "ok";
      } catch (const std::exception& e) {
        cell.status = "failed";
        cell.error = e.what();
      }
      cells.push_back(std::move(cell));
    }
  }

  CsvWriter csv((fs::path(out_dir) / "summary.csv").string(),
                {"axis", "value", "seed", "status", "mean_return", "success_rate", "cell_dir",
                 "error"});
  for (const AblationCell& cell : cells) {
    std::string value_text =
        cell.value.is_string() ? cell.value.get<std::string>() : cell.value.dump();
    csv.WriteRow({cell.axis, value_text, FormatInt(static_cast<int64_t>(cell.seed)), cell.status,
                  cell.eval ? FormatDouble(cell.eval->mean_return) : "",
                  cell.eval ? FormatDouble(cell.eval->success_rate) : "", cell.cell_dir,
                  cell.error});
  }
  csv.Close();
  return cells;
}

void ExportPlotData(const std::vector<std::string>& run_dirs, const std::string& out_file) {
  if (run_dirs.empty()) {
    throw std::invalid_argument("export-plot-data: no run directories given");
  }
  fs::path out(out_file);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  CsvWriter csv(out_file, {"run", "iteration", "cum_env_steps", "mean_return", "success_rate"});

  for (const std::string& dir : run_dirs) {
    fs::path episodes_path = fs::path(dir) / kEpisodesFile;
    if (!fs::exists(episodes_path)) {
      throw std::runtime_error("no " + std::string(kEpisodesFile) + " in " + dir);
    }
    CsvTable table = ReadCsv(episodes_path.string());
    int c_iter = table.ColumnIndex("iteration");
    int c_return = table.ColumnIndex("return");
    int c_success = table.ColumnIndex("success");
    int c_cum = table.ColumnIndex("cum_env_steps");
    if (c_iter < 0 || c_return < 0 || c_success < 0 || c_cum < 0) {
      throw std::runtime_error("unexpected episodes.csv schema in " + dir);
    }

    // aggregate per iteration, preserving first-seen order
    struct Bucket {
      double sum_return = 0.0;
      int successes = 0;
      int count = 0;
      int64_t last_cum = 0;
    };
    std::vector<std::pair<std::string, Bucket>> buckets;
    for (const auto& row : table.rows) {
      const std::string& iter = row[c_iter];
      auto it = std::find_if(buckets.begin(), buckets.end(),
                             [&](const auto& b) { return b.first == iter; });
      if (it == buckets.end()) {
        buckets.push_back({iter, Bucket{}});
        it = std::prev(buckets.end());
      }
      it->second.sum_return += ParseDouble(row[c_return]);
      it->second.successes += row[c_success] == "1" ? 1 : 0;
      it->second.count += 1;
      it->second.last_cum = std::stoll(row[c_cum]);
    }
    std::string run_name = fs::path(dir).filename().string();
    if (run_name.empty()) run_name = dir;
    for (const auto& [iter, bucket] : buckets) {
      csv.WriteRow({run_name, iter, FormatInt(bucket.last_cum),
                    FormatDouble(bucket.sum_return / bucket.count),
                    FormatDouble(static_cast<double>(bucket.successes) / bucket.count)});
    }
  }
  csv.Close();
}

}  // namespace pddm

// command-line harness: train / eval / ablate / export-plot-data.
// exit codes: 0 success, 2 configuration error, 3 runtime failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pddm/harness.hpp"
#include "pddm/version.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

std::string TimestampedDir(const std::string& prefix) {
  std::string stamp = pddm::UtcTimestamp();
  for (char& c : stamp) {
    if (c == ':') c = '-';
  }
  return (fs::path(pddm::DefaultOutputRoot()) / (prefix + "_" + stamp)).string();
}

void PrintEval(const pddm::EvalSummary& s) {
  std::cout << "episodes " << s.episodes << ", successes " << s.successes << " (rate "
            << s.success_rate << ", 95% CI [" << s.ci_low << ", " << s.ci_high << "])\n"
            << "mean return " << s.mean_return << " (std " << s.return_std << "), mean length "
            << s.mean_length << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"model-based RL harness: online ensemble dynamics learning with "
               "sampling-based MPC"};
  app.set_version_flag("--version", pddm::CodeVersion());
  app.require_subcommand(1);

  // train
  std::string train_config, train_manifest, train_out;
  int64_t train_seed = -1;
  CLI::App* train = app.add_subcommand("train", "run the online train/collect loop");
  CLI::Option* opt_config = train->add_option("--config", train_config, "experiment config JSON");
  CLI::Option* opt_manifest =
      train->add_option("--from-manifest", train_manifest,
                        "rerun the configuration recorded in an existing manifest.json");
  opt_config->excludes(opt_manifest);
  train->add_option("--seed", train_seed, "override experiment.seed")
      ->check(CLI::NonNegativeNumber);
  train->add_option("--out", train_out, "run directory (default under " +
                                            std::string(pddm::kOutputRootEnvVar) + ")");

  // eval
  std::string eval_config, eval_checkpoint, eval_out;
  int eval_episodes = -1;
  uint64_t eval_seed = 0;
  bool eval_oracle = false;
  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint (or the oracle) with MPC");
  eval->add_option("--config", eval_config, "experiment config JSON (env + planner settings)")
      ->required();
  CLI::Option* opt_ckpt = eval->add_option("--checkpoint", eval_checkpoint, "ensemble checkpoint");
  CLI::Option* opt_oracle = eval->add_flag("--oracle", eval_oracle,
                                           "plan on the ground-truth dynamics instead of a model");
  opt_ckpt->excludes(opt_oracle);
  eval->add_option("--episodes", eval_episodes, "episodes to run (default eval.episodes)");
  eval->add_option("--seed", eval_seed, "evaluation seed (default 0)");
  eval->add_option("--out", eval_out, "metrics CSV path (default under output root)");

  // ablate
  std::string ablate_grid, ablate_out;
  CLI::App* ablate = app.add_subcommand("ablate", "sweep one axis of a base config");
  ablate->add_option("--grid", ablate_grid, "grid JSON (axis, values, seeds, base)")->required();
  ablate->add_option("--out", ablate_out, "sweep directory (default under output root)");

  // export-plot-data
  std::vector<std::string> export_runs;
  std::string export_out;
  CLI::App* export_cmd =
      app.add_subcommand("export-plot-data", "aggregate run episodes into plot-ready CSV");
  export_cmd->add_option("--runs", export_runs, "run directories to aggregate")
      ->required()
      ->expected(-1);
  export_cmd->add_option("--out", export_out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (*train) {
      pddm::HarnessConfig config;
      if (!train_manifest.empty()) {
        pddm::RunManifest manifest = pddm::RunManifest::Load(train_manifest);
        config = pddm::ParseHarnessConfig(manifest.config);
      } else if (!train_config.empty()) {
        config = pddm::LoadHarnessConfig(train_config);
      } else {
        std::cerr << "train: provide --config or --from-manifest\n";
        return kExitConfigError;
      }
      if (train->count("--seed") > 0) {
        config.experiment.seed = static_cast<uint64_t>(train_seed);
      }
      if (train_out.empty()) {
        train_out = TimestampedDir("train_" + config.env_name + "_seed" +
                                   std::to_string(config.experiment.seed));
      }
      pddm::ExperimentResult result = pddm::RunTrain(config, train_out);
      std::cout << "run directory: " << train_out << "\n"
                << "episodes: " << result.episodes.size()
                << ", env steps: " << result.total_env_steps << "\n";
      if (!result.losses.empty()) {
        std::cout << "final model loss: " << result.losses.back().loss << "\n";
      }
      return kExitOk;
    }

    if (*eval) {
      pddm::HarnessConfig config = pddm::LoadHarnessConfig(eval_config);
      if (eval_checkpoint.empty() && !eval_oracle) {
        std::cerr << "eval: provide --checkpoint or --oracle\n";
        return kExitConfigError;
      }
      int episodes = eval_episodes > 0 ? eval_episodes : config.eval_episodes;
      if (eval_out.empty()) {
        eval_out = TimestampedDir("eval_" + config.env_name) + ".csv";
      }
      pddm::EvalSummary summary =
          pddm::RunEval(config, eval_checkpoint, episodes, eval_seed, eval_out);
      PrintEval(summary);
      std::cout << "metrics: " << eval_out << "\n";
      return kExitOk;
    }

    if (*ablate) {
      pddm::AblationGrid grid = pddm::LoadAblationGrid(ablate_grid);
      if (ablate_out.empty()) {
        ablate_out = TimestampedDir("ablate_" + grid.axis);
      }
      std::vector<pddm::AblationCell> cells = pddm::RunAblation(grid, ablate_out);
      int failed = 0;
      for (const pddm::AblationCell& cell : cells) {
        std::cout << grid.axis << "=" << cell.value.dump() << " seed=" << cell.seed << ": "
                  << cell.status;
        if (cell.eval) {
          std::cout << ", mean return " << cell.eval->mean_return << ", success rate "
                    << cell.eval->success_rate;
        }
        if (cell.status == "failed") {
          ++failed;
          std::cout << " (" << cell.error << ")";
        }
        std::cout << "\n";
      }
      std::cout << "summary: " << (fs::path(ablate_out) / "summary.csv").string() << " ("
                << cells.size() << " cells, " << failed << " failed)\n";
      return kExitOk;
    }

    if (*export_cmd) {
      pddm::ExportPlotData(export_runs, export_out);
      std::cout << "wrote " << export_out << "\n";
      return kExitOk;
    }
  } catch (const pddm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
  return kExitConfigError;
}

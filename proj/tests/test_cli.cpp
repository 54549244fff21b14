// end-to-end tests that drive the installed command-line binary as a subprocess.
// the harness points PDDM_CLI_PATH at the freshly built executable.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "pddm/csv.hpp"
#include "pddm/harness.hpp"

using namespace pddm;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) return "";
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

const std::string& CliPath() {
  static const std::string path = [] {
#ifdef PDDM_CLI_PATH
    return std::string(PDDM_CLI_PATH);
#else
    const char* env = std::getenv("PDDM_CLI_PATH");
    REQUIRE_MESSAGE(env != nullptr, "PDDM_CLI_PATH must point at the cli binary");
    return std::string(env);
#endif
  }();
  return path;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const char* name)
      : path(fs::path("/tmp") /
             ("pddm_cli_" + std::string(name) + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }

  std::string WriteJson(const char* name, const json& value) const {
    fs::path file = path / name;
    std::ofstream out(file);
    out << value.dump(2);
    return file.string();
  }
};

CliResult RunCli(const TempDir& tmp, const std::string& args) {
  fs::path out_file = tmp.path / "stdout.txt";
  fs::path err_file = tmp.path / "stderr.txt";
  std::string command =
      CliPath() + " " + args + " >" + out_file.string() + " 2>" + err_file.string();
  int status = std::system(command.c_str());
  CliResult result;
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = ReadFile(out_file);
  result.err = ReadFile(err_file);
  return result;
}

json TinyRunJson(const char* env_name = "pendulum") {
  return json::parse(std::string(R"({
    "env": {"name": ")") + env_name + R"("},
    "experiment": {"I": 1, "R": 2, "T": 3, "E": 1, "seed": 4},
    "model": {"hidden": [8], "M": 1, "batch_size": 16},
    "planner": {"kind": "random_shooting", "H": 2, "N": 4},
    "eval": {"episodes": 2}
  })");
}

}  // namespace

TEST_CASE("help and version exit cleanly") {
  TempDir tmp("help");
  CliResult help = RunCli(tmp, "--help");
  CHECK(help.code == 0);
  CHECK(help.out.find("train") != std::string::npos);
  CHECK(help.out.find("eval") != std::string::npos);
  CHECK(help.out.find("ablate") != std::string::npos);
  CHECK(help.out.find("export-plot-data") != std::string::npos);

  CliResult version = RunCli(tmp, "--version");
  CHECK(version.code == 0);
  CHECK_FALSE(version.out.empty());
}

TEST_CASE("bad invocations exit with the configuration code") {
  TempDir tmp("badargs");
  CHECK(RunCli(tmp, "").code == 2);                  // subcommand required
  CHECK(RunCli(tmp, "frobnicate").code == 2);        // unknown subcommand
  CHECK(RunCli(tmp, "train --no-such-flag").code == 2);
  CHECK(RunCli(tmp, "train").code == 2);             // neither --config nor --from-manifest
  CHECK(RunCli(tmp, "eval --config x.json").code == 2);  // neither --checkpoint nor --oracle
}

TEST_CASE("train writes a run directory and reruns from its manifest") {
  TempDir tmp("train");
  std::string config = tmp.WriteJson("config.json", TinyRunJson());
  fs::path run_dir = tmp.path / "run";

  CliResult train = RunCli(tmp, "train --config " + config + " --out " + run_dir.string());
  INFO(train.err);
  REQUIRE(train.code == 0);
  CHECK(train.out.find(run_dir.string()) != std::string::npos);
  CHECK(fs::exists(run_dir / kEpisodesFile));
  CHECK(fs::exists(run_dir / kModelLossFile));
  CHECK(fs::exists(run_dir / kCheckpointFile));
  CHECK(fs::exists(run_dir / kManifestFile));
  CHECK_FALSE(fs::exists(run_dir / kIncompleteMarker));

  fs::path rerun_dir = tmp.path / "rerun";
  CliResult rerun = RunCli(tmp, "train --from-manifest " + (run_dir / kManifestFile).string() +
                                    " --out " + rerun_dir.string());
  INFO(rerun.err);
  REQUIRE(rerun.code == 0);
  CHECK(ReadFile(run_dir / kEpisodesFile) == ReadFile(rerun_dir / kEpisodesFile));
  CHECK(ReadFile(run_dir / kCheckpointFile) == ReadFile(rerun_dir / kCheckpointFile));

  // the seed override is recorded and changes the trajectory stream
  fs::path seeded_dir = tmp.path / "seeded";
  CliResult seeded = RunCli(tmp, "train --config " + config + " --seed 77 --out " +
                                     seeded_dir.string());
  REQUIRE(seeded.code == 0);
  RunManifest manifest = RunManifest::Load((seeded_dir / kManifestFile).string());
  CHECK(manifest.seed == 77);
  CHECK(ReadFile(run_dir / kEpisodesFile) != ReadFile(seeded_dir / kEpisodesFile));
}

TEST_CASE("train rejects an invalid config file") {
  TempDir tmp("badcfg");
  json bad = TinyRunJson();
  bad["mystery"] = 1;
  std::string config = tmp.WriteJson("config.json", bad);
  CliResult result = RunCli(tmp, "train --config " + config);
  CHECK(result.code == 2);
  CHECK(result.err.find("config error") != std::string::npos);
  CHECK(result.err.find("mystery") != std::string::npos);

  CliResult missing = RunCli(tmp, "train --config /no/such/file.json");
  CHECK(missing.code == 2);
}

TEST_CASE("eval runs from the oracle or a trained checkpoint") {
  TempDir tmp("eval");
  std::string config = tmp.WriteJson("config.json", TinyRunJson());
  fs::path run_dir = tmp.path / "run";
  REQUIRE(RunCli(tmp, "train --config " + config + " --out " + run_dir.string()).code == 0);

  fs::path oracle_csv = tmp.path / "oracle.csv";
  CliResult oracle = RunCli(tmp, "eval --config " + config + " --oracle --episodes 2 --seed 1" +
                                     " --out " + oracle_csv.string());
  INFO(oracle.err);
  REQUIRE(oracle.code == 0);
  CHECK(oracle.out.find("episodes 2") != std::string::npos);
  CHECK(ReadCsv(oracle_csv.string()).rows.size() == 1);

  fs::path ckpt_csv = tmp.path / "ckpt.csv";
  CliResult ckpt = RunCli(tmp, "eval --config " + config + " --checkpoint " +
                                   (run_dir / kCheckpointFile).string() + " --episodes 2" +
                                   " --out " + ckpt_csv.string());
  INFO(ckpt.err);
  REQUIRE(ckpt.code == 0);
  CHECK(ReadCsv(ckpt_csv.string()).rows.size() == 1);

  // --checkpoint and --oracle are mutually exclusive
  CHECK(RunCli(tmp, "eval --config " + config + " --oracle --checkpoint " +
                        (run_dir / kCheckpointFile).string())
            .code == 2);

  // a missing checkpoint is a runtime failure, not a usage error
  CHECK(RunCli(tmp, "eval --config " + config + " --checkpoint /no/such.ckpt").code == 3);
}

TEST_CASE("ablate sweeps a grid file and reports each cell") {
  TempDir tmp("ablate");
  json grid = {{"axis", "horizon"},
               {"values", {2, 3}},
               {"seeds", {0}},
               {"base", TinyRunJson("toy_valve")}};
  std::string grid_file = tmp.WriteJson("grid.json", grid);
  fs::path out = tmp.path / "sweep";

  CliResult result = RunCli(tmp, "ablate --grid " + grid_file + " --out " + out.string());
  INFO(result.err);
  REQUIRE(result.code == 0);
  CHECK(result.out.find("horizon=2") != std::string::npos);
  CHECK(result.out.find("horizon=3") != std::string::npos);
  CHECK(result.out.find("0 failed") != std::string::npos);
  CHECK(ReadCsv((out / "summary.csv").string()).rows.size() == 2);

  json bad_grid = grid;
  bad_grid["axis"] = "momentum";
  CHECK(RunCli(tmp, "ablate --grid " + tmp.WriteJson("bad.json", bad_grid)).code == 2);
}

TEST_CASE("export-plot-data aggregates runs") {
  TempDir tmp("export");
  std::string config = tmp.WriteJson("config.json", TinyRunJson());
  fs::path run_dir = tmp.path / "run";
  REQUIRE(RunCli(tmp, "train --config " + config + " --out " + run_dir.string()).code == 0);

  fs::path out = tmp.path / "plot.csv";
  CliResult result =
      RunCli(tmp, "export-plot-data --runs " + run_dir.string() + " --out " + out.string());
  INFO(result.err);
  REQUIRE(result.code == 0);
  CsvTable table = ReadCsv(out.string());
  CHECK(table.rows.size() == 1);  // one iteration in the tiny config
  CHECK(table.rows[0][0] == "run");

  CHECK(RunCli(tmp, "export-plot-data --runs /no/such/dir --out " + out.string()).code == 3);
  CHECK(RunCli(tmp, "export-plot-data --out " + out.string()).code == 2);  // --runs required
}

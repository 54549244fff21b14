#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "pddm/config.hpp"
#include "pddm/csv.hpp"
#include "pddm/manifest.hpp"

using namespace pddm;
using nlohmann::json;

namespace {

// a complete description of the valve benchmark at desk scale
const char* kValveConfig = R"({
  "env": {"name": "toy_valve"},
  "experiment": {"I": 10, "R": 20, "T": 200, "E": 40, "seed": 3},
  "model": {"hidden": [250, 250], "M": 3, "batch_size": 500, "learning_rate": 0.001},
  "planner": {"kind": "pddm", "H": 7, "N": 200, "gamma": 10.0, "beta": 0.6},
  "eval": {"episodes": 20}
})";

std::string TempFile(const char* name, const std::string& contents) {
  std::string path = std::string("/tmp/pddm_cfg_") + name + "_" + std::to_string(::getpid());
  std::ofstream out(path);
  out << contents;
  return path;
}

}  // namespace

TEST_CASE("a full experiment description parses field for field") {
  HarnessConfig config = ParseHarnessConfig(json::parse(kValveConfig));
  CHECK(config.env_name == "toy_valve");
  CHECK(config.experiment.iterations == 10);
  CHECK(config.experiment.rollouts_per_iter == 20);
  CHECK(config.experiment.steps_per_rollout == 200);
  CHECK(config.experiment.train_epochs == 40);
  CHECK(config.experiment.seed == 3);
  CHECK(config.experiment.warmstart_weights == true);
  CHECK(config.experiment.hidden == std::vector<int>{250, 250});
  CHECK(config.experiment.ensemble_size == 3);
  CHECK(config.experiment.batch_size == 500);
  CHECK(config.experiment.learning_rate == 0.001);
  CHECK(config.experiment.planner.kind == PlannerKind::kPddm);
  CHECK(config.experiment.planner.horizon == 7);
  CHECK(config.experiment.planner.num_candidates == 200);
  CHECK(config.experiment.planner.gamma == 10.0);
  CHECK(config.experiment.planner.beta == 0.6);
  CHECK(config.eval_episodes == 20);
}

TEST_CASE("omitted sections fall back to defaults") {
  json root = json::parse(R"({
    "env": {"name": "pendulum", "params": {"dt": 0.1, "max_torque": 4.0}},
    "experiment": {"I": 1, "R": 1, "T": 10, "E": 1},
    "planner": {"kind": "random_shooting", "H": 5, "N": 50}
  })");
  HarnessConfig config = ParseHarnessConfig(root);
  CHECK(config.env_params.at("dt") == 0.1);
  CHECK(config.env_params.at("max_torque") == 4.0);
  CHECK(config.experiment.seed == 0);
  CHECK(config.experiment.hidden == std::vector<int>{500, 500});
  CHECK(config.experiment.ensemble_size == 3);
  CHECK(config.experiment.batch_size == 500);
  CHECK(config.eval_episodes == 20);
  // gamma/beta/J are optional for planners that do not use them
  CHECK(config.experiment.planner.kind == PlannerKind::kRandomShooting);
}

TEST_CASE("missing required fields are reported by path") {
  auto expect_error = [](const char* text, const char* needle) {
    CHECK_THROWS_WITH_AS(ParseHarnessConfig(json::parse(text)), doctest::Contains(needle),
                         ConfigError);
  };
  expect_error(R"({"experiment": {"I":1,"R":1,"T":1,"E":1},
                   "planner": {"kind":"pddm","H":7,"N":10,"gamma":10,"beta":0.6}})",
               "env");
  expect_error(R"({"env": {"name":"pendulum"},
                   "experiment": {"I":1,"R":1,"T":1,"E":1},
                   "planner": {"kind":"pddm","N":10,"gamma":10,"beta":0.6}})",
               "planner.H");
  expect_error(R"({"env": {"name":"pendulum"},
                   "experiment": {"R":1,"T":1,"E":1},
                   "planner": {"kind":"pddm","H":7,"N":10,"gamma":10,"beta":0.6}})",
               "experiment.I");
  expect_error(R"({"env": {"name":"pendulum"},
                   "experiment": {"I":1,"R":1,"T":1,"E":1},
                   "planner": {"H":7,"N":10}})",
               "planner.kind");
}

TEST_CASE("each planner demands the knobs it actually uses") {
  const char* base = R"({
    "env": {"name": "pendulum"},
    "experiment": {"I": 1, "R": 1, "T": 10, "E": 1},
    "planner": %s
  })";
  auto with_planner = [&](const char* planner) {
    std::string text = base;
    text.replace(text.find("%s"), 2, planner);
    return json::parse(text);
  };

  // reward-weighted refinement needs gamma and beta
  CHECK_THROWS_WITH_AS(
      ParseHarnessConfig(with_planner(R"({"kind":"pddm","H":7,"N":10,"gamma":10})")),
      doctest::Contains("planner.beta"), ConfigError);
  CHECK_THROWS_WITH_AS(
      ParseHarnessConfig(with_planner(R"({"kind":"pddm","H":7,"N":10,"beta":0.6})")),
      doctest::Contains("planner.gamma"), ConfigError);
  // cem needs its elite count and iteration count
  CHECK_THROWS_WITH_AS(
      ParseHarnessConfig(with_planner(R"({"kind":"cem","H":7,"N":10,"cem_iters":4})")),
      doctest::Contains("planner.J"), ConfigError);
  CHECK_THROWS_WITH_AS(
      ParseHarnessConfig(with_planner(R"({"kind":"cem","H":7,"N":10,"J":3})")),
      doctest::Contains("planner.cem_iters"), ConfigError);
  // random shooting needs neither
  CHECK_NOTHROW(ParseHarnessConfig(with_planner(R"({"kind":"random_shooting","H":7,"N":10})")));
  CHECK_NOTHROW(ParseHarnessConfig(
      with_planner(R"({"kind":"cem","H":7,"N":10,"J":3,"cem_iters":4,"alpha":0.5})")));
  CHECK_THROWS_WITH_AS(ParseHarnessConfig(with_planner(R"({"kind":"mppi","H":7,"N":10})")),
                       doctest::Contains("planner.kind"), ConfigError);
}

TEST_CASE("unknown keys anywhere are rejected with their path") {
  auto expect_error = [](const char* text, const char* needle) {
    CHECK_THROWS_WITH_AS(ParseHarnessConfig(json::parse(text)), doctest::Contains(needle),
                         ConfigError);
  };
  expect_error(R"({"env": {"name":"pendulum"},
                   "experiment": {"I":1,"R":1,"T":1,"E":1},
                   "planner": {"kind":"random_shooting","H":7,"N":10},
                   "schedule": {}})",
               "schedule");
  expect_error(R"({"env": {"name":"pendulum", "horizon": 3},
                   "experiment": {"I":1,"R":1,"T":1,"E":1},
                   "planner": {"kind":"random_shooting","H":7,"N":10}})",
               "env.horizon");
  expect_error(R"({"env": {"name":"pendulum"},
                   "experiment": {"I":1,"R":1,"T":1,"E":1,"epochs":2},
                   "planner": {"kind":"random_shooting","H":7,"N":10}})",
               "experiment.epochs");
  expect_error(R"({"env": {"name":"pendulum"},
                   "experiment": {"I":1,"R":1,"T":1,"E":1},
                   "planner": {"kind":"random_shooting","H":7,"N":10,"momentum":0.9}})",
               "planner.momentum");
  expect_error(R"({"env": {"name":"pendulum"},
                   "experiment": {"I":1,"R":1,"T":1,"E":1},
                   "model": {"width": 80},
                   "planner": {"kind":"random_shooting","H":7,"N":10}})",
               "model.width");
}

TEST_CASE("type and range problems are config errors too") {
  auto expect_error = [](const char* text, const char* needle) {
    CHECK_THROWS_WITH_AS(ParseHarnessConfig(json::parse(text)), doctest::Contains(needle),
                         ConfigError);
  };
  expect_error(R"({"env": {"name":"pendulum"},
                   "experiment": {"I":"ten","R":1,"T":1,"E":1},
                   "planner": {"kind":"random_shooting","H":7,"N":10}})",
               "experiment.I");
  expect_error(R"({"env": {"name":"pendulum"},
                   "experiment": {"I":1,"R":1,"T":1,"E":1,"warmstart_weights":1},
                   "planner": {"kind":"random_shooting","H":7,"N":10}})",
               "warmstart_weights");
  expect_error(R"({"env": {"name":"pendulum", "params": {"dt":"fast"}},
                   "experiment": {"I":1,"R":1,"T":1,"E":1},
                   "planner": {"kind":"random_shooting","H":7,"N":10}})",
               "env.params.dt");
  expect_error(R"({"env": {"name":"walker"},
                   "experiment": {"I":1,"R":1,"T":1,"E":1},
                   "planner": {"kind":"random_shooting","H":7,"N":10}})",
               "walker");
  expect_error(R"({"env": {"name":"pendulum", "params": {"masss": 2}},
                   "experiment": {"I":1,"R":1,"T":1,"E":1},
                   "planner": {"kind":"random_shooting","H":7,"N":10}})",
               "masss");
  expect_error(R"({"env": {"name":"pendulum"},
                   "experiment": {"I":1,"R":1,"T":1,"E":1},
                   "planner": {"kind":"random_shooting","H":0,"N":10}})",
               "planner.H");
  expect_error(R"({"env": {"name":"pendulum"},
                   "experiment": {"I":1,"R":1,"T":1,"E":1},
                   "planner": {"kind":"random_shooting","H":5,"N":10,
                               "sample_std":[0.3, 0.3]}})",
               "planner.sample_std");
  expect_error(R"({"env": {"name":"pendulum"},
                   "experiment": {"I":1,"R":1,"T":1,"E":1,"seed":-4},
                   "planner": {"kind":"random_shooting","H":5,"N":10}})",
               "experiment.seed");
  expect_error(R"({"env": {"name":"pendulum"},
                   "experiment": {"I":1,"R":1,"T":1,"E":1},
                   "model": {"hidden": []},
                   "planner": {"kind":"random_shooting","H":5,"N":10}})",
               "model.hidden");
}

TEST_CASE("config files load with comments and fail cleanly otherwise") {
  std::string commented = std::string("// desk-scale valve run\n") + kValveConfig;
  std::string path = TempFile("valve", commented);
  HarnessConfig config = LoadHarnessConfig(path);
  CHECK(config.env_name == "toy_valve");
  std::remove(path.c_str());

  std::string broken = TempFile("broken", "{\"env\": ");
  CHECK_THROWS_WITH_AS(LoadHarnessConfig(broken), doctest::Contains("valid JSON"), ConfigError);
  std::remove(broken.c_str());

  CHECK_THROWS_AS(LoadHarnessConfig("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("the resolved snapshot reparses to the identical config") {
  HarnessConfig config = ParseHarnessConfig(json::parse(kValveConfig));
  config.env_params["dt"] = 0.15;

  json snapshot = HarnessConfigToJson(config);
  HarnessConfig reparsed = ParseHarnessConfig(snapshot);

  CHECK(reparsed.env_name == config.env_name);
  CHECK(reparsed.env_params == config.env_params);
  CHECK(reparsed.experiment.iterations == config.experiment.iterations);
  CHECK(reparsed.experiment.seed == config.experiment.seed);
  CHECK(reparsed.experiment.hidden == config.experiment.hidden);
  CHECK(reparsed.experiment.planner.kind == config.experiment.planner.kind);
  CHECK(reparsed.experiment.planner.gamma == config.experiment.planner.gamma);
  CHECK(reparsed.experiment.planner.sample_std == config.experiment.planner.sample_std);
  CHECK(reparsed.eval_episodes == config.eval_episodes);
  // and the snapshot of the reparse is byte-identical
  CHECK(HarnessConfigToJson(reparsed).dump() == snapshot.dump());
}

TEST_CASE("doubles survive the CSV round trip exactly") {
  const double values[] = {0.0,
                           -0.0,
                           0.1,
                           1.0 / 3.0,
                           M_PI,
                           -M_PI * 1e-20,
                           1e300,
                           -1e-300,
                           123456789.123456789,
                           std::numeric_limits<double>::max(),
                           std::numeric_limits<double>::min(),
                           std::numeric_limits<double>::denorm_min(),
                           std::numeric_limits<double>::infinity(),
                           -std::numeric_limits<double>::infinity()};
  for (double v : values) {
    CAPTURE(v);
    double back = ParseDouble(FormatDouble(v));
    CHECK(std::memcmp(&back, &v, sizeof v) == 0);
  }
  // shortest form, not noise
  CHECK(FormatDouble(0.1) == "0.1");
  CHECK(FormatDouble(2.0) == "2");
  CHECK(FormatDouble(-0.5) == "-0.5");

  double nan_back = ParseDouble(FormatDouble(std::numeric_limits<double>::quiet_NaN()));
  CHECK(std::isnan(nan_back));

  CHECK_THROWS_AS(ParseDouble("fast"), std::invalid_argument);
  CHECK_THROWS_AS(ParseDouble("1.5x"), std::invalid_argument);
  CHECK_THROWS_AS(ParseDouble(""), std::invalid_argument);
}

TEST_CASE("csv writer and reader round-trip quoting and widths") {
  std::string path = TempFile("table", "");
  {
    CsvWriter writer(path, {"name", "value", "note"});
    writer.WriteRow({"plain", "1.5", "no quoting needed"});
    writer.WriteRow({"comma,separated", "-2", "embedded \"quotes\""});
    writer.WriteRow({"multi\nline", FormatDouble(1.0 / 3.0), ""});
    CHECK_THROWS_AS(writer.WriteRow({"too", "few"}), std::logic_error);
    writer.Close();
  }
  CsvTable table = ReadCsv(path);
  REQUIRE(table.header == std::vector<std::string>{"name", "value", "note"});
  REQUIRE(table.rows.size() == 3);
  CHECK(table.rows[0][0] == "plain");
  CHECK(table.rows[1][0] == "comma,separated");
  CHECK(table.rows[1][2] == "embedded \"quotes\"");
  CHECK(table.rows[2][0] == "multi\nline");
  CHECK(ParseDouble(table.rows[2][1]) == 1.0 / 3.0);
  CHECK(table.ColumnIndex("value") == 1);
  CHECK(table.ColumnIndex("missing") == -1);
  std::remove(path.c_str());

  CHECK_THROWS_AS(ReadCsv("/nonexistent/file.csv"), std::runtime_error);
}

TEST_CASE("manifest round-trips through json and disk") {
  RunManifest manifest;
  manifest.config = HarnessConfigToJson(ParseHarnessConfig(json::parse(kValveConfig)));
  manifest.seed = 3;
  manifest.code_version = "0.1.0+test";
  manifest.created_utc = "2024-01-02T03:04:05Z";
  manifest.finished_utc = "2024-01-02T03:14:05Z";
  manifest.out_dir = "runs/example";
  manifest.total_env_steps = 40000;
  manifest.wall_clock_seconds = 600.25;
  manifest.status = "complete";

  RunManifest back = RunManifest::FromJson(manifest.ToJson());
  CHECK(back.config == manifest.config);
  CHECK(back.seed == manifest.seed);
  CHECK(back.code_version == manifest.code_version);
  CHECK(back.created_utc == manifest.created_utc);
  CHECK(back.finished_utc == manifest.finished_utc);
  CHECK(back.out_dir == manifest.out_dir);
  CHECK(back.total_env_steps == manifest.total_env_steps);
  CHECK(back.wall_clock_seconds == manifest.wall_clock_seconds);
  CHECK(back.status == manifest.status);

  std::string path = TempFile("manifest", "");
  manifest.Save(path);
  RunManifest loaded = RunManifest::Load(path);
  CHECK(loaded.ToJson() == manifest.ToJson());
  std::remove(path.c_str());

  std::string garbage = TempFile("garbage", "not json");
  CHECK_THROWS_AS(RunManifest::Load(garbage), std::runtime_error);
  std::remove(garbage.c_str());
}

TEST_CASE("utc timestamps have the fixed format") {
  std::string ts = UtcTimestamp();
  REQUIRE(ts.size() == 20);
  CHECK(ts[4] == '-');
  CHECK(ts[7] == '-');
  CHECK(ts[10] == 'T');
  CHECK(ts[13] == ':');
  CHECK(ts[16] == ':');
  CHECK(ts[19] == 'Z');
}

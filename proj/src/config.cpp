#include "pddm/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace pddm {

namespace {

using nlohmann::json;

// walks one object level, tracking which keys were consumed so leftovers can
// be reported as unknown, with full field paths in every message
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) {
      throw ConfigError(path_ + ": expected an object");
    }
  }

  const json* Find(const std::string& key) {
    seen_.insert(key);
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  const json& Require(const std::string& key) {
    const json* value = Find(key);
    if (value == nullptr) {
      throw ConfigError("missing required field '" + Child(key) + "'");
    }
    return *value;
  }

  double Number(const std::string& key, double fallback) {
    const json* value = Find(key);
    return value == nullptr ? fallback : AsNumber(*value, Child(key));
  }

  double RequiredNumber(const std::string& key) { return AsNumber(Require(key), Child(key)); }

  int Integer(const std::string& key, int fallback) {
    const json* value = Find(key);
    return value == nullptr ? fallback : AsInteger(*value, Child(key));
  }

  int RequiredInteger(const std::string& key) { return AsInteger(Require(key), Child(key)); }

  bool Boolean(const std::string& key, bool fallback) {
    const json* value = Find(key);
    if (value == nullptr) return fallback;
    if (!value->is_boolean()) throw ConfigError(Child(key) + ": expected a boolean");
    return value->get<bool>();
  }

  uint64_t Uint64(const std::string& key, uint64_t fallback) {
    const json* value = Find(key);
    if (value == nullptr) return fallback;
    if (value->is_number_unsigned()) return value->get<uint64_t>();
    if (value->is_number_integer() && value->get<int64_t>() >= 0) {
      return static_cast<uint64_t>(value->get<int64_t>());
    }
    throw ConfigError(Child(key) + ": expected a non-negative integer");
  }

  std::string RequiredString(const std::string& key) {
    const json& value = Require(key);
    if (!value.is_string()) throw ConfigError(Child(key) + ": expected a string");
    return value.get<std::string>();
  }

  std::string Child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  // call last: anything not consumed is a typo or an unsupported option
  void RejectUnknown() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.count(it.key())) {
        std::ostringstream msg;
        msg << "unknown key '" << Child(it.key()) << "'; known keys:";
        for (const std::string& k : seen_) msg << " " << k;
        throw ConfigError(msg.str());
      }
    }
  }

  static double AsNumber(const json& value, const std::string& path) {
    if (!value.is_number()) throw ConfigError(path + ": expected a number");
    return value.get<double>();
  }

  static int AsInteger(const json& value, const std::string& path) {
    if (!value.is_number_integer()) throw ConfigError(path + ": expected an integer");
    return value.get<int>();
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

std::vector<int> IntArray(const json& value, const std::string& path) {
  if (!value.is_array() || value.empty()) {
    throw ConfigError(path + ": expected a non-empty array of integers");
  }
  std::vector<int> out;
  for (size_t i = 0; i < value.size(); ++i) {
    out.push_back(Section::AsInteger(value[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

HarnessConfig ParseHarnessConfig(const json& root) {
  Section top(root, "");
  HarnessConfig config;

  {
    Section env(top.Require("env"), "env");
    config.env_name = env.RequiredString("name");
    if (const json* params = env.Find("params")) {
      if (!params->is_object()) throw ConfigError("env.params: expected an object");
      for (auto it = params->begin(); it != params->end(); ++it) {
        config.env_params[it.key()] =
            Section::AsNumber(it.value(), "env.params." + it.key());
      }
    }
    env.RejectUnknown();
  }

  ExperimentConfig& ex = config.experiment;
  {
    Section experiment(top.Require("experiment"), "experiment");
    ex.iterations = experiment.RequiredInteger("I");
    ex.rollouts_per_iter = experiment.RequiredInteger("R");
    ex.steps_per_rollout = experiment.RequiredInteger("T");
    ex.train_epochs = experiment.RequiredInteger("E");
    ex.seed = experiment.Uint64("seed", 0);
    ex.warmstart_weights = experiment.Boolean("warmstart_weights", true);
    experiment.RejectUnknown();
  }

  if (const json* model_node = top.Find("model")) {
    Section model(*model_node, "model");
    if (const json* hidden = model.Find("hidden")) {
      ex.hidden = IntArray(*hidden, "model.hidden");
    }
    ex.ensemble_size = model.Integer("M", ex.ensemble_size);
    ex.batch_size = model.Integer("batch_size", ex.batch_size);
    ex.learning_rate = model.Number("learning_rate", ex.learning_rate);
    model.RejectUnknown();
  }

  PlannerConfig& pl = ex.planner;
  {
    Section planner(top.Require("planner"), "planner");
    std::string kind = planner.RequiredString("kind");
    try {
      pl.kind = PlannerKindFromString(kind);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("planner.kind: ") + e.what());
    }
    pl.horizon = planner.RequiredInteger("H");
    pl.num_candidates = planner.RequiredInteger("N");
    // the knobs that define each refinement are required for the planner that
    // uses them and optional otherwise
    if (pl.kind == PlannerKind::kPddm) {
      pl.gamma = planner.RequiredNumber("gamma");
      pl.beta = planner.RequiredNumber("beta");
    } else {
      pl.gamma = planner.Number("gamma", pl.gamma);
      pl.beta = planner.Number("beta", pl.beta);
    }
    if (pl.kind == PlannerKind::kCem) {
      pl.elite_count = planner.RequiredInteger("J");
      pl.cem_iters = planner.RequiredInteger("cem_iters");
    } else {
      pl.elite_count = planner.Integer("J", pl.elite_count);
      pl.cem_iters = planner.Integer("cem_iters", pl.cem_iters);
    }
    pl.alpha = planner.Number("alpha", pl.alpha);
    if (const json* std_node = planner.Find("sample_std")) {
      pl.sample_std.clear();
      if (std_node->is_array()) {
        for (size_t i = 0; i < std_node->size(); ++i) {
          pl.sample_std.push_back(Section::AsNumber(
              (*std_node)[i], "planner.sample_std[" + std::to_string(i) + "]"));
        }
      } else {
        pl.sample_std.push_back(Section::AsNumber(*std_node, "planner.sample_std"));
      }
    }
    planner.RejectUnknown();
  }

  if (const json* eval_node = top.Find("eval")) {
    Section eval(*eval_node, "eval");
    config.eval_episodes = eval.Integer("episodes", config.eval_episodes);
    eval.RejectUnknown();
  }
  top.RejectUnknown();

  if (config.eval_episodes < 1) throw ConfigError("eval.episodes must be >= 1");

  // range checks live with the structs; re-tag their complaints as config errors
  try {
    std::unique_ptr<Environment> env = MakeEnvironment(config.env_name, config.env_params);
    config.experiment.Validate(env->ActionDim());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return config;
}

HarnessConfig LoadHarnessConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json root;
  try {
    root = json::parse(in,
                       /*cb=*/nullptr, /*allow_exceptions=*/true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return ParseHarnessConfig(root);
}

nlohmann::json HarnessConfigToJson(const HarnessConfig& config) {
  const ExperimentConfig& ex = config.experiment;
  const PlannerConfig& pl = ex.planner;
  json root;
  root["env"]["name"] = config.env_name;
  root["env"]["params"] = json::object();
  for (const auto& [key, value] : config.env_params) {
    root["env"]["params"][key] = value;
  }
  root["experiment"] = {{"I", ex.iterations},          {"R", ex.rollouts_per_iter},
                        {"T", ex.steps_per_rollout},   {"E", ex.train_epochs},
                        {"seed", ex.seed},             {"warmstart_weights", ex.warmstart_weights}};
  root["model"] = {{"hidden", ex.hidden},
                   {"M", ex.ensemble_size},
                   {"batch_size", ex.batch_size},
                   {"learning_rate", ex.learning_rate}};
  root["planner"] = {{"kind", PlannerKindToString(pl.kind)},
                     {"H", pl.horizon},
                     {"N", pl.num_candidates},
                     {"gamma", pl.gamma},
                     {"beta", pl.beta},
                     {"J", pl.elite_count},
                     {"alpha", pl.alpha},
                     {"cem_iters", pl.cem_iters},
                     {"sample_std", pl.sample_std}};
  root["eval"] = {{"episodes", config.eval_episodes}};
  return root;
}

}  // namespace pddm

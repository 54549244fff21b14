#ifndef PDDM_MANIFEST_H_
#define PDDM_MANIFEST_H_

#include <cstdint>
#include <string>

#include <json.hpp>

namespace pddm {

// everything needed to reproduce a run: the fully resolved config (seed
// included) plus bookkeeping. rerunning from a manifest regenerates
// byte-identical CSV outputs; only the timestamps and directory differ.
struct RunManifest {
  nlohmann::json config;  // resolved HarnessConfig snapshot
  uint64_t seed = 0;      // copy of config.experiment.seed for quick reading
  std::string code_version;
  std::string created_utc;
  std::string finished_utc;
  std::string out_dir;
  int64_t total_env_steps = -1;
  double wall_clock_seconds = -1.0;
  std::string status = "running";  // running | complete | failed

  nlohmann::json ToJson() const;
  static RunManifest FromJson(const nlohmann::json& j);

  void Save(const std::string& path) const;
  static RunManifest Load(const std::string& path);
};

// current time as "YYYY-MM-DDTHH:MM:SSZ"
std::string UtcTimestamp();

}  // namespace pddm

#endif  // PDDM_MANIFEST_H_

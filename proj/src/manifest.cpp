#include "pddm/manifest.hpp"

#include <ctime>
#include <fstream>
#include <stdexcept>

namespace pddm {

nlohmann::json RunManifest::ToJson() const {
  return {{"config", config},
          {"seed", seed},
          {"code_version", code_version},
          {"created_utc", created_utc},
          {"finished_utc", finished_utc},
          {"out_dir", out_dir},
          {"total_env_steps", total_env_steps},
          {"wall_clock_seconds", wall_clock_seconds},
          {"status", status}};
}

RunManifest RunManifest::FromJson(const nlohmann::json& j) {
  RunManifest m;
  m.config = j.at("config");
  m.seed = j.at("seed").get<uint64_t>();
  m.code_version = j.at("code_version").get<std::string>();
  m.created_utc = j.value("created_utc", "");
  m.finished_utc = j.value("finished_utc", "");
  m.out_dir = j.value("out_dir", "");
  m.total_env_steps = j.value("total_env_steps", int64_t{-1});
  m.wall_clock_seconds = j.value("wall_clock_seconds", -1.0);
  m.status = j.value("status", "");
  return m;
}

void RunManifest::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << ToJson().dump(2) << '\n';
  out.flush();
  if (!out) throw std::runtime_error("manifest write failed: " + path);
}

RunManifest RunManifest::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read manifest: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("manifest is not valid JSON: ") + e.what());
  }
  try {
    return FromJson(j);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("manifest missing fields: ") + e.what());
  }
}

std::string UtcTimestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buffer;
}

}  // namespace pddm

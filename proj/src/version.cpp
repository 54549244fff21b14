#include "pddm/version.hpp"

namespace pddm {

std::string CodeVersion() {
#ifdef PDDM_GIT_REVISION
  return std::string(kVersion) + "+" + PDDM_GIT_REVISION;
#else
  return kVersion;
#endif
}

}  // namespace pddm

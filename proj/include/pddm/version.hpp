#ifndef PDDM_VERSION_H_
#define PDDM_VERSION_H_

#include <string>

namespace pddm {

inline constexpr const char kVersion[] = "0.1.0";

// "<semver>+<git revision>" when the build knows its revision, else "<semver>"
std::string CodeVersion();

}  // namespace pddm

#endif  // PDDM_VERSION_H_

#ifndef PDDM_CHECKPOINT_H_
#define PDDM_CHECKPOINT_H_

#include <stdexcept>
#include <string>

#include "pddm/ensemble.hpp"

namespace pddm {

// binary ensemble snapshot, little-endian:
//   magic "PDDM" | u32 version | u64 members | u64 state_dim | u64 action_dim
//   | u64 hidden-layer count | u64 widths...
//   then per member: u64 init_seed | f64 lr, beta1, beta2, epsilon | i64 step
//   | flattened f64 weights | flattened f64 adam m | flattened f64 adam v
//   (flattening: per layer, weight matrix row-major then bias)
//   then normalization stats: f64 state mean/std, action mean/std, delta
//   mean/std vectors.
// doubles round-trip bit-exactly, so save + load reproduces the ensemble and
// its optimizer state bitwise.

inline constexpr char kCheckpointMagic[4] = {'P', 'D', 'D', 'M'};
inline constexpr uint32_t kCheckpointVersion = 1;

struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// wrong magic, unsupported version, or trailing garbage
struct CheckpointFormatError : CheckpointError {
  using CheckpointError::CheckpointError;
};
// file ends before the declared payload
struct CheckpointTruncatedError : CheckpointError {
  using CheckpointError::CheckpointError;
};
// declared dimensions are unusable or inconsistent
struct CheckpointDimensionError : CheckpointError {
  using CheckpointError::CheckpointError;
};

void SaveCheckpoint(const ModelEnsemble& ensemble, const std::string& path);
ModelEnsemble LoadCheckpoint(const std::string& path);

}  // namespace pddm

#endif  // PDDM_CHECKPOINT_H_

#include "pddm/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

namespace pddm {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format is little-endian; this build targets little-endian only");

namespace {

constexpr uint64_t kMaxReasonableDim = 1 << 24;  // guards allocations on corrupt headers

struct Writer {
  std::ofstream out;

  explicit Writer(const std::string& path) : out(path, std::ios::binary) {
    if (!out) throw CheckpointError("cannot open checkpoint for writing: " + path);
  }
  void Bytes(const void* data, size_t n) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  }
  void U32(uint32_t v) { Bytes(&v, sizeof v); }
  void U64(uint64_t v) { Bytes(&v, sizeof v); }
  void I64(int64_t v) { Bytes(&v, sizeof v); }
  void F64(double v) { Bytes(&v, sizeof v); }
  void Vector(const Eigen::VectorXd& v) { Bytes(v.data(), sizeof(double) * v.size()); }
  void Layers(const std::vector<LayerTensors>& layers) {
    for (const LayerTensors& layer : layers) {
      // row-major so the layout is independent of Eigen's internal ordering
      for (int r = 0; r < layer.weight.rows(); ++r) {
        for (int c = 0; c < layer.weight.cols(); ++c) {
          F64(layer.weight(r, c));
        }
      }
      Vector(layer.bias);
    }
  }
};

struct Reader {
  std::ifstream in;
  std::string path;

  explicit Reader(const std::string& p) : in(p, std::ios::binary), path(p) {
    if (!in) throw CheckpointError("cannot open checkpoint for reading: " + p);
  }
  void Bytes(void* data, size_t n) {
    in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in.gcount()) != n) {
      throw CheckpointTruncatedError("checkpoint truncated: " + path);
    }
  }
  uint32_t U32() { uint32_t v; Bytes(&v, sizeof v); return v; }
  uint64_t U64() { uint64_t v; Bytes(&v, sizeof v); return v; }
  int64_t I64() { int64_t v; Bytes(&v, sizeof v); return v; }
  double F64() { double v; Bytes(&v, sizeof v); return v; }
  Eigen::VectorXd Vector(int64_t n) {
    Eigen::VectorXd v(n);
    Bytes(v.data(), sizeof(double) * static_cast<size_t>(n));
    return v;
  }
  void Layers(std::vector<LayerTensors>& layers) {
    for (LayerTensors& layer : layers) {
      for (int r = 0; r < layer.weight.rows(); ++r) {
        for (int c = 0; c < layer.weight.cols(); ++c) {
          layer.weight(r, c) = F64();
        }
      }
      layer.bias = Vector(layer.bias.size());
    }
  }
  bool AtEof() {
    in.peek();
    return in.eof();
  }
};

uint64_t CheckedDim(uint64_t v, const char* what) {
  if (v < 1 || v > kMaxReasonableDim) {
    throw CheckpointDimensionError(std::string("checkpoint declares unusable ") + what + ": " +
                                   std::to_string(v));
  }
  return v;
}

}  // namespace

void SaveCheckpoint(const ModelEnsemble& ensemble, const std::string& path) {
  Writer w(path);
  w.Bytes(kCheckpointMagic, sizeof kCheckpointMagic);
  w.U32(kCheckpointVersion);
  w.U64(static_cast<uint64_t>(ensemble.NumMembers()));
  w.U64(static_cast<uint64_t>(ensemble.StateDim()));
  w.U64(static_cast<uint64_t>(ensemble.ActionDim()));
  std::vector<int> hidden = ensemble.HiddenWidths();
  w.U64(hidden.size());
  for (int width : hidden) {
    w.U64(static_cast<uint64_t>(width));
  }
  for (int i = 0; i < ensemble.NumMembers(); ++i) {
    const EnsembleMember& member = ensemble.member(i);
    w.U64(member.init_seed);
    w.F64(member.optimizer.learning_rate);
    w.F64(member.optimizer.beta1);
    w.F64(member.optimizer.beta2);
    w.F64(member.optimizer.epsilon);
    w.I64(member.optimizer.step);
    w.Layers(member.params.layers);
    w.Layers(member.optimizer.m);
    w.Layers(member.optimizer.v);
  }
  const NormalizationStats& stats = ensemble.stats();
  w.Vector(stats.state_mean);
  w.Vector(stats.state_std);
  w.Vector(stats.action_mean);
  w.Vector(stats.action_std);
  w.Vector(stats.delta_mean);
  w.Vector(stats.delta_std);
  w.out.flush();
  if (!w.out) throw CheckpointError("checkpoint write failed: " + path);
}

ModelEnsemble LoadCheckpoint(const std::string& path) {
  Reader r(path);
  char magic[4];
  r.Bytes(magic, sizeof magic);
  if (std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0) {
    throw CheckpointFormatError("not a model checkpoint (bad magic): " + path);
  }
  uint32_t version = r.U32();
  if (version != kCheckpointVersion) {
    throw CheckpointFormatError("unsupported checkpoint version " + std::to_string(version) +
                                " (expected " + std::to_string(kCheckpointVersion) + ")");
  }
  uint64_t members = CheckedDim(r.U64(), "member count");
  int state_dim = static_cast<int>(CheckedDim(r.U64(), "state dimension"));
  int action_dim = static_cast<int>(CheckedDim(r.U64(), "action dimension"));
  uint64_t hidden_count = r.U64();
  if (hidden_count > 64) {
    throw CheckpointDimensionError("checkpoint declares unusable hidden layer count: " +
                                   std::to_string(hidden_count));
  }
  std::vector<int> hidden(hidden_count);
  for (uint64_t i = 0; i < hidden_count; ++i) {
    hidden[i] = static_cast<int>(CheckedDim(r.U64(), "hidden width"));
  }

  ModelEnsemble ensemble = ModelEnsemble::Init(state_dim, action_dim, hidden,
                                               static_cast<int>(members), /*seed=*/0);
  for (uint64_t i = 0; i < members; ++i) {
    EnsembleMember& member = ensemble.member(static_cast<int>(i));
    member.init_seed = r.U64();
    member.optimizer.learning_rate = r.F64();
    member.optimizer.beta1 = r.F64();
    member.optimizer.beta2 = r.F64();
    member.optimizer.epsilon = r.F64();
    member.optimizer.step = r.I64();
    r.Layers(member.params.layers);
    r.Layers(member.optimizer.m);
    r.Layers(member.optimizer.v);
  }
  NormalizationStats stats;
  stats.state_mean = r.Vector(state_dim);
  stats.state_std = r.Vector(state_dim);
  stats.action_mean = r.Vector(action_dim);
  stats.action_std = r.Vector(action_dim);
  stats.delta_mean = r.Vector(state_dim);
  stats.delta_std = r.Vector(state_dim);
  ensemble.SetStats(stats);
  if (!r.AtEof()) {
    throw CheckpointFormatError("checkpoint has trailing bytes: " + path);
  }
  return ensemble;
}

}  // namespace pddm

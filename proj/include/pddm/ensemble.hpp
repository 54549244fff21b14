#ifndef PDDM_ENSEMBLE_H_
#define PDDM_ENSEMBLE_H_

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "pddm/dataset.hpp"
#include "pddm/dynamics_model.hpp"
#include "pddm/mlp.hpp"
#include "pddm/normalization.hpp"
#include "pddm/rng.hpp"

namespace pddm {

struct EnsembleMember {
  MlpParams params;
  AdamState optimizer;
  uint64_t init_seed = 0;
};

// ensemble of identically shaped MLPs trained on the same data. each member
// predicts the normalized state delta from (normalized state, normalized
// action); members differ only through their random initialization and the
// order they visit batches in. normalization stats are shared.
class ModelEnsemble : public DynamicsModel {
 public:
  // member i is initialized from DeriveSeed(seed, i)
  static ModelEnsemble Init(int state_dim, int action_dim, const std::vector<int>& hidden,
                            int num_members, uint64_t seed, double learning_rate = 1e-3);

  int NumMembers() const override { return static_cast<int>(members_.size()); }
  int StateDim() const override { return state_dim_; }
  int ActionDim() const override { return action_dim_; }
  std::vector<int> HiddenWidths() const { return members_.front().params.HiddenWidths(); }

  const NormalizationStats& stats() const { return stats_; }
  void SetStats(const NormalizationStats& stats);

  EnsembleMember& member(int i) { return members_.at(i); }
  const EnsembleMember& member(int i) const { return members_.at(i); }

  // raw network output: predicted normalized delta for one (s, a) pair.
  // rejects non-finite input.
  Eigen::VectorXd ForwardNormalizedDelta(int member, const Eigen::VectorXd& state,
                                         const Eigen::VectorXd& action) const;

  // next-state prediction: s + denormalized network output
  Eigen::VectorXd PredictNext(int member, const Eigen::VectorXd& state,
                              const Eigen::VectorXd& action) const;

  void PredictNextBatch(int member, const Eigen::MatrixXd& states, const Eigen::MatrixXd& actions,
                        Eigen::MatrixXd& next_states) const override;

  // one pass over the dataset per member: independent shuffle, batches of
  // batch_size (last one smaller), one Adam step per batch. shuffles are drawn
  // from `rng` member by member, so the caller's stream fully determines
  // training order. returns the per-member epoch loss (batch losses weighted
  // by batch size).
  Eigen::VectorXd TrainEpoch(const TransitionDataset& dataset, int batch_size, Rng& rng);

 private:
  int state_dim_ = 0;
  int action_dim_ = 0;
  NormalizationStats stats_;
  std::vector<EnsembleMember> members_;
};

}  // namespace pddm

#endif  // PDDM_ENSEMBLE_H_

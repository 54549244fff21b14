#include "pddm/ensemble.hpp"

#include <numeric>
#include <stdexcept>

namespace pddm {

ModelEnsemble ModelEnsemble::Init(int state_dim, int action_dim, const std::vector<int>& hidden,
                                  int num_members, uint64_t seed, double learning_rate) {
  if (num_members < 1) {
    throw std::invalid_argument("ModelEnsemble::Init: need at least one member");
  }
  ModelEnsemble ensemble;
  ensemble.state_dim_ = state_dim;
  ensemble.action_dim_ = action_dim;
  ensemble.stats_ = NormalizationStats::Identity(state_dim, action_dim);
  ensemble.members_.reserve(num_members);
  for (int i = 0; i < num_members; ++i) {
    EnsembleMember member;
    member.init_seed = DeriveSeed(seed, static_cast<uint64_t>(i));
    Rng rng(member.init_seed);
    member.params = MlpParams::Init(state_dim + action_dim, state_dim, hidden, rng);
    member.optimizer = AdamState::For(member.params, learning_rate);
    ensemble.members_.push_back(std::move(member));
  }
  return ensemble;
}

void ModelEnsemble::SetStats(const NormalizationStats& stats) {
  if (stats.state_dim() != state_dim_ || stats.action_dim() != action_dim_) {
    throw std::invalid_argument("ModelEnsemble::SetStats: dimension mismatch");
  }
  stats_ = stats;
}

Eigen::VectorXd ModelEnsemble::ForwardNormalizedDelta(int member, const Eigen::VectorXd& state,
                                                      const Eigen::VectorXd& action) const {
  if (state.size() != state_dim_ || action.size() != action_dim_) {
    throw std::invalid_argument("ModelEnsemble: input dimension mismatch");
  }
  if (!state.allFinite() || !action.allFinite()) {
    throw std::invalid_argument("ModelEnsemble: non-finite input");
  }
  Eigen::MatrixXd input(1, state_dim_ + action_dim_);
  input.leftCols(state_dim_) = stats_.NormalizeStates(state.transpose());
  input.rightCols(action_dim_) = stats_.NormalizeActions(action.transpose());
  return members_.at(member).params.Forward(input).row(0).transpose();
}

Eigen::VectorXd ModelEnsemble::PredictNext(int member, const Eigen::VectorXd& state,
                                           const Eigen::VectorXd& action) const {
  Eigen::VectorXd normalized = ForwardNormalizedDelta(member, state, action);
  return state + stats_.DenormalizeDeltas(normalized.transpose()).row(0).transpose();
}

void ModelEnsemble::PredictNextBatch(int member, const Eigen::MatrixXd& states,
                                     const Eigen::MatrixXd& actions,
                                     Eigen::MatrixXd& next_states) const {
  if (states.cols() != state_dim_ || actions.cols() != action_dim_ ||
      states.rows() != actions.rows()) {
    throw std::invalid_argument("ModelEnsemble::PredictNextBatch: shape mismatch");
  }
  Eigen::MatrixXd input(states.rows(), state_dim_ + action_dim_);
  input.leftCols(state_dim_) = stats_.NormalizeStates(states);
  input.rightCols(action_dim_) = stats_.NormalizeActions(actions);
  next_states = states + stats_.DenormalizeDeltas(members_.at(member).params.Forward(input));
}

Eigen::VectorXd ModelEnsemble::TrainEpoch(const TransitionDataset& dataset, int batch_size,
                                          Rng& rng) {
  if (dataset.size() == 0) {
    throw std::invalid_argument("ModelEnsemble::TrainEpoch: empty dataset");
  }
  if (dataset.state_dim() != state_dim_ || dataset.action_dim() != action_dim_) {
    throw std::invalid_argument("ModelEnsemble::TrainEpoch: dataset dimension mismatch");
  }
  if (batch_size < 1) {
    throw std::invalid_argument("ModelEnsemble::TrainEpoch: batch_size must be positive");
  }

  const int n = dataset.size();
  // normalize once per epoch; stats are frozen while training
  Eigen::MatrixXd inputs(n, state_dim_ + action_dim_);
  inputs.leftCols(state_dim_) = stats_.NormalizeStates(dataset.states());
  inputs.rightCols(action_dim_) = stats_.NormalizeActions(dataset.actions());
  Eigen::MatrixXd targets = stats_.NormalizeDeltas(dataset.next_states() - dataset.states());

  Eigen::VectorXd losses(NumMembers());
  std::vector<int> order(n);
  for (int m = 0; m < NumMembers(); ++m) {
    std::iota(order.begin(), order.end(), 0);
    rng.Shuffle(order);

    double weighted_loss = 0.0;
    for (int start = 0; start < n; start += batch_size) {
      const int count = std::min(batch_size, n - start);
      Eigen::MatrixXd batch_in(count, inputs.cols());
      Eigen::MatrixXd batch_target(count, targets.cols());
      for (int r = 0; r < count; ++r) {
        batch_in.row(r) = inputs.row(order[start + r]);
        batch_target.row(r) = targets.row(order[start + r]);
      }
      MlpGradients grads = BackwardMse(members_[m].params, batch_in, batch_target);
      members_[m].optimizer.Apply(members_[m].params, grads);
      weighted_loss += grads.loss * count;
    }
    losses[m] = weighted_loss / n;
  }
  return losses;
}

}  // namespace pddm

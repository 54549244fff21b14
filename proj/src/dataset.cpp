#include "pddm/dataset.hpp"

#include <stdexcept>
#include <string>

namespace pddm {

namespace {
constexpr int kInitialCapacity = 1024;
}

TransitionDataset::TransitionDataset(int state_dim, int action_dim)
    : state_dim_(state_dim), action_dim_(action_dim) {
  if (state_dim < 1 || action_dim < 1) {
    throw std::invalid_argument("TransitionDataset: dimensions must be positive");
  }
  Reserve(kInitialCapacity);
}

void TransitionDataset::Reserve(int capacity) {
  states_.conservativeResize(capacity, state_dim_);
  actions_.conservativeResize(capacity, action_dim_);
  next_states_.conservativeResize(capacity, state_dim_);
}

void TransitionDataset::Append(const Eigen::VectorXd& state, const Eigen::VectorXd& action,
                               const Eigen::VectorXd& next_state, int iteration, int episode) {
  if (state.size() != state_dim_ || next_state.size() != state_dim_) {
    throw std::invalid_argument("TransitionDataset::Append: state dimension mismatch");
  }
  if (action.size() != action_dim_) {
    throw std::invalid_argument("TransitionDataset::Append: action dimension mismatch");
  }
  if (!state.allFinite() || !action.allFinite() || !next_state.allFinite()) {
    throw std::invalid_argument("TransitionDataset::Append: non-finite transition");
  }
  for (int i = 0; i < action.size(); ++i) {
    if (action[i] < -1.0 || action[i] > 1.0) {
      throw std::invalid_argument("TransitionDataset::Append: action component " +
                                  std::to_string(i) + " outside [-1, 1]");
    }
  }
  if (size_ == states_.rows()) {
    Reserve(2 * size_);
  }
  states_.row(size_) = state.transpose();
  actions_.row(size_) = action.transpose();
  next_states_.row(size_) = next_state.transpose();
  iterations_.push_back(iteration);
  episodes_.push_back(episode);
  ++size_;
}

}  // namespace pddm

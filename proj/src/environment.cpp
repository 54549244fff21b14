#include "pddm/environment.hpp"

#include <cmath>
#include <stdexcept>

namespace pddm {

double AngularDistance(double a, double b) {
  return std::abs(std::atan2(std::sin(a - b), std::cos(a - b)));
}

Eigen::VectorXd Environment::Transition(const Eigen::VectorXd& state,
                                        const Eigen::VectorXd& action) const {
  if (state.size() != StateDim()) {
    throw std::invalid_argument(Name() + ": state dimension mismatch");
  }
  if (action.size() != ActionDim()) {
    throw std::invalid_argument(Name() + ": action dimension mismatch");
  }
  if (!state.allFinite() || !action.allFinite()) {
    throw std::invalid_argument(Name() + ": non-finite transition input");
  }
  for (int i = 0; i < action.size(); ++i) {
    if (action[i] < -1.0 || action[i] > 1.0) {
      throw std::invalid_argument(Name() + ": action outside [-1, 1]; caller must clamp");
    }
  }
  return Encode(RawStep(Decode(state), action));
}

std::pair<Eigen::VectorXd, bool> Environment::Step(const Eigen::VectorXd& action) {
  if (state_.size() == 0) {
    throw std::logic_error(Name() + ": Step before Reset");
  }
  state_ = Transition(state_, action);
  ++step_count_;
  bool done = Failure(state_) || step_count_ >= horizon_;
  return {state_, done};
}

void Environment::SetState(const Eigen::VectorXd& state) {
  if (state.size() != StateDim()) {
    throw std::invalid_argument(Name() + ": SetState dimension mismatch");
  }
  state_ = state;
  step_count_ = 0;
}

void Environment::StartEpisode(const Eigen::VectorXd& raw_state) {
  state_ = Encode(raw_state);
  step_count_ = 0;
}

void OracleModel::PredictNextBatch(int member, const Eigen::MatrixXd& states,
                                   const Eigen::MatrixXd& actions,
                                   Eigen::MatrixXd& next_states) const {
  if (member != 0) {
    throw std::invalid_argument("OracleModel has a single member");
  }
  next_states.resize(states.rows(), states.cols());
  for (int r = 0; r < states.rows(); ++r) {
    next_states.row(r) =
        env_.Transition(states.row(r).transpose(), actions.row(r).transpose()).transpose();
  }
}

}  // namespace pddm

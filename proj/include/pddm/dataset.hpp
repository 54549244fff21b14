#ifndef PDDM_DATASET_H_
#define PDDM_DATASET_H_

#include <Eigen/Core>
#include <vector>

namespace pddm {

// append-only store of (state, action, next_state) transitions plus the
// iteration/episode that produced each one. nothing is ever pruned: models are
// trained on all data collected so far, on-policy or not.
class TransitionDataset {
 public:
  TransitionDataset(int state_dim, int action_dim);

  // validates dimensions, finiteness, and that every action component lies in
  // [-1, 1]; throws std::invalid_argument otherwise.
  void Append(const Eigen::VectorXd& state, const Eigen::VectorXd& action,
              const Eigen::VectorXd& next_state, int iteration = 0, int episode = 0);

  int size() const { return size_; }
  int state_dim() const { return state_dim_; }
  int action_dim() const { return action_dim_; }

  // one row per transition, exactly size() rows
  Eigen::Block<const Eigen::MatrixXd> states() const { return states_.topRows(size_); }
  Eigen::Block<const Eigen::MatrixXd> actions() const { return actions_.topRows(size_); }
  Eigen::Block<const Eigen::MatrixXd> next_states() const { return next_states_.topRows(size_); }

  int iteration(int i) const { return iterations_.at(i); }
  int episode(int i) const { return episodes_.at(i); }

 private:
  void Reserve(int capacity);

  int state_dim_;
  int action_dim_;
  int size_ = 0;
  Eigen::MatrixXd states_;
  Eigen::MatrixXd actions_;
  Eigen::MatrixXd next_states_;
  std::vector<int> iterations_;
  std::vector<int> episodes_;
};

}  // namespace pddm

#endif  // PDDM_DATASET_H_

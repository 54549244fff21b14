#ifndef PDDM_NORMALIZATION_H_
#define PDDM_NORMALIZATION_H_

#include <Eigen/Core>

namespace pddm {

class TransitionDataset;

// per-dimension mean/std for states, actions, and state deltas. every std is
// floored at kStdFloor so constant dimensions normalize to zero instead of
// dividing by zero.
struct NormalizationStats {
  static constexpr double kStdFloor = 1e-8;

  Eigen::VectorXd state_mean, state_std;
  Eigen::VectorXd action_mean, action_std;
  Eigen::VectorXd delta_mean, delta_std;

  // mean 0, std 1 everywhere: normalization is the identity
  static NormalizationStats Identity(int state_dim, int action_dim);

  int state_dim() const { return static_cast<int>(state_mean.size()); }
  int action_dim() const { return static_cast<int>(action_mean.size()); }

  // all row-wise over (rows x dim) matrices
  Eigen::MatrixXd NormalizeStates(const Eigen::MatrixXd& states) const;
  Eigen::MatrixXd NormalizeActions(const Eigen::MatrixXd& actions) const;
  Eigen::MatrixXd NormalizeDeltas(const Eigen::MatrixXd& deltas) const;
  Eigen::MatrixXd DenormalizeDeltas(const Eigen::MatrixXd& normalized) const;
};

// population mean/std (divide by n) of every dimension over the whole dataset,
// with the std floor applied. throws std::invalid_argument on an empty dataset.
NormalizationStats FitNormalization(const TransitionDataset& dataset);

}  // namespace pddm

#endif  // PDDM_NORMALIZATION_H_

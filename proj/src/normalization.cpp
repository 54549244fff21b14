#include "pddm/normalization.hpp"

#include <stdexcept>

#include "pddm/dataset.hpp"

namespace pddm {

namespace {

// row-wise (x - mean) / std
Eigen::MatrixXd Normalize(const Eigen::MatrixXd& x, const Eigen::VectorXd& mean,
                          const Eigen::VectorXd& std) {
  return (x.rowwise() - mean.transpose()).array().rowwise() / std.transpose().array();
}

void FitColumns(const Eigen::MatrixXd& x, Eigen::VectorXd& mean, Eigen::VectorXd& std) {
  const double n = static_cast<double>(x.rows());
  mean = x.colwise().mean();
  Eigen::ArrayXd var = (x.rowwise() - mean.transpose()).array().square().colwise().sum() / n;
  std = var.sqrt().max(NormalizationStats::kStdFloor).matrix();
}

}  // namespace

NormalizationStats NormalizationStats::Identity(int state_dim, int action_dim) {
  NormalizationStats stats;
  stats.state_mean = Eigen::VectorXd::Zero(state_dim);
  stats.state_std = Eigen::VectorXd::Ones(state_dim);
  stats.action_mean = Eigen::VectorXd::Zero(action_dim);
  stats.action_std = Eigen::VectorXd::Ones(action_dim);
  stats.delta_mean = Eigen::VectorXd::Zero(state_dim);
  stats.delta_std = Eigen::VectorXd::Ones(state_dim);
  return stats;
}

Eigen::MatrixXd NormalizationStats::NormalizeStates(const Eigen::MatrixXd& states) const {
  return Normalize(states, state_mean, state_std);
}

Eigen::MatrixXd NormalizationStats::NormalizeActions(const Eigen::MatrixXd& actions) const {
  return Normalize(actions, action_mean, action_std);
}

Eigen::MatrixXd NormalizationStats::NormalizeDeltas(const Eigen::MatrixXd& deltas) const {
  return Normalize(deltas, delta_mean, delta_std);
}

Eigen::MatrixXd NormalizationStats::DenormalizeDeltas(const Eigen::MatrixXd& normalized) const {
  return (normalized.array().rowwise() * delta_std.transpose().array()).matrix().rowwise() +
         delta_mean.transpose();
}

NormalizationStats FitNormalization(const TransitionDataset& dataset) {
  if (dataset.size() == 0) {
    throw std::invalid_argument("FitNormalization: empty dataset");
  }
  NormalizationStats stats;
  FitColumns(dataset.states(), stats.state_mean, stats.state_std);
  FitColumns(dataset.actions(), stats.action_mean, stats.action_std);
  Eigen::MatrixXd deltas = dataset.next_states() - dataset.states();
  FitColumns(deltas, stats.delta_mean, stats.delta_std);
  return stats;
}

}  // namespace pddm

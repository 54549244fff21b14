#ifndef PDDM_ENVIRONMENT_H_
#define PDDM_ENVIRONMENT_H_

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pddm/dynamics_model.hpp"

namespace pddm {

// smallest absolute angle between two angles, in [0, pi]
double AngularDistance(double a, double b);

// analytic control task. the state handed out and consumed everywhere is the
// observation vector (angles appear as sin/cos pairs), so learned models and
// planners never see raw coordinates. Reward/Success/Failure/Transition are
// pure functions of their arguments and are safe to call on model-predicted
// states; the episode api (Reset/Step) just tracks the current observation
// and a step counter on top of Transition.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string Name() const = 0;
  virtual int StateDim() const = 0;
  virtual int ActionDim() const = 0;
  virtual double Dt() const = 0;

  // added to a rollout's return (and the episode log) once when Failure fires
  virtual double FailurePenalty() const { return 0.0; }
  // consecutive Success states required before an episode counts as solved
  virtual int SuccessHoldSteps() const { return 1; }

  virtual double Reward(const Eigen::VectorXd& state, const Eigen::VectorXd& action) const = 0;
  virtual bool Success(const Eigen::VectorXd& state) const = 0;
  virtual bool Failure(const Eigen::VectorXd& state) const { return false; }

  // one dynamics step (semi-implicit Euler at Dt). validates dimensions,
  // finiteness, and that actions lie in [-1, 1]; throws std::invalid_argument
  // otherwise.
  Eigen::VectorXd Transition(const Eigen::VectorXd& state, const Eigen::VectorXd& action) const;

  // episode api; Step routes through Transition so the ground-truth adapter
  // and the episode dynamics are the same code path
  virtual Eigen::VectorXd Reset(uint64_t seed) = 0;
  std::pair<Eigen::VectorXd, bool> Step(const Eigen::VectorXd& action);

  void SetState(const Eigen::VectorXd& state);
  const Eigen::VectorXd& state() const { return state_; }

  int horizon() const { return horizon_; }
  void set_horizon(int horizon) { horizon_ = horizon; }
  int step_count() const { return step_count_; }

 protected:
  // raw-coordinate dynamics implemented by each task
  virtual Eigen::VectorXd RawStep(const Eigen::VectorXd& raw,
                                  const Eigen::VectorXd& action) const = 0;
  virtual Eigen::VectorXd Encode(const Eigen::VectorXd& raw) const = 0;
  virtual Eigen::VectorXd Decode(const Eigen::VectorXd& observation) const = 0;

  void StartEpisode(const Eigen::VectorXd& raw_state);

  Eigen::VectorXd state_;
  int step_count_ = 0;
  int horizon_ = 200;
};

// ground-truth dynamics exposed through the model interface: a single-member
// "ensemble" whose predictions are the environment's analytic transition.
class OracleModel : public DynamicsModel {
 public:
  explicit OracleModel(const Environment& env) : env_(env) {}

  int NumMembers() const override { return 1; }
  int StateDim() const override { return env_.StateDim(); }
  int ActionDim() const override { return env_.ActionDim(); }

  void PredictNextBatch(int member, const Eigen::MatrixXd& states, const Eigen::MatrixXd& actions,
                        Eigen::MatrixXd& next_states) const override;

 private:
  const Environment& env_;
};

// toy_valve reward as a function of the angular distance to the target, with
// strict inequalities at both bonus thresholds; exposed so the boundary
// convention can be tested without trig round-trips
double ToyValveRewardFromDistance(double distance);

// environments are constructed by name with optional overrides for their
// physical constants; an unknown name or parameter key throws
// std::invalid_argument listing what is available.
std::unique_ptr<Environment> MakeEnvironment(const std::string& name,
                                             const std::map<std::string, double>& overrides = {});
std::vector<std::string> EnvironmentNames();

}  // namespace pddm

#endif  // PDDM_ENVIRONMENT_H_

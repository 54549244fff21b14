#ifndef PDDM_AGENT_H_
#define PDDM_AGENT_H_

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "pddm/dataset.hpp"
#include "pddm/ensemble.hpp"
#include "pddm/environment.hpp"
#include "pddm/planners.hpp"

namespace pddm {

// the full online loop: alternate between collecting rollouts with MPC on the
// current ensemble and training every member on all data gathered so far
struct ExperimentConfig {
  int iterations = 10;        // I: collect-then-train rounds
  int rollouts_per_iter = 5;  // R: episodes collected per round
  int steps_per_rollout = 200;  // T: max steps per episode
  int train_epochs = 40;      // E: dataset passes per member per round

  std::vector<int> hidden = {500, 500};
  int ensemble_size = 3;  // M
  int batch_size = 500;
  double learning_rate = 1e-3;

  uint64_t seed = 0;
  // keep weights across iterations (continue training); false reinitializes
  // every iteration from a fresh derived seed
  bool warmstart_weights = true;

  PlannerConfig planner;

  void Validate(int action_dim) const;
};

struct StepRecord {
  Eigen::VectorXd state;   // observation the action was chosen in
  Eigen::VectorXd action;
  double reward;           // env reward, plus the failure penalty on a failing step
  bool done;
};

struct EpisodeLog {
  int iteration = 0;
  int episode = 0;  // global episode index within the run
  std::vector<StepRecord> steps;
  double episode_return = 0.0;  // always the sum of step rewards
  bool success = false;  // success predicate held SuccessHoldSteps() consecutive states
  int Length() const { return static_cast<int>(steps.size()); }
};

struct TrainRecord {
  int iteration = 0;
  int epoch = 0;
  int member = 0;
  double loss = 0.0;
};

struct ExperimentResult {
  ModelEnsemble ensemble;
  TransitionDataset dataset;
  std::vector<EpisodeLog> episodes;
  std::vector<TrainRecord> losses;
  int64_t total_env_steps = 0;
};

// one MPC step: plan from the current state, hand back the first action and
// the warm-start mean for the next step
std::pair<Eigen::VectorXd, Eigen::MatrixXd> MpcStep(const Eigen::VectorXd& state,
                                                    const DynamicsModel& model,
                                                    const Environment& env,
                                                    const PlannerConfig& config,
                                                    const Eigen::MatrixXd& mu_prev, Rng& rng);

// runs one episode under MPC, replanning every step. appends transitions to
// `dataset` when given. the episode ends early when the environment reports
// done (failure or step limit).
EpisodeLog RunEpisode(Environment& env, const DynamicsModel& model, const PlannerConfig& config,
                      uint64_t reset_seed, Rng& plan_rng, int iteration, int episode,
                      TransitionDataset* dataset);

// the online algorithm. iteration 0 plans with the untrained ensemble; each
// iteration collects R episodes, refits normalization stats on everything
// collected so far, then trains each member for E epochs. deterministic:
// the same config and seed reproduce the run bit for bit.
ExperimentResult RunExperiment(Environment& env, const ExperimentConfig& config);

struct EvalSummary {
  int episodes = 0;
  int successes = 0;
  double success_rate = 0.0;
  double ci_low = 0.0;   // Wilson 95% interval on the success rate
  double ci_high = 0.0;
  double mean_return = 0.0;
  double return_std = 0.0;  // sample standard deviation across episodes
  double mean_length = 0.0;
};

// rolls fresh episodes without training; the rng streams are derived from
// `seed` alone so evaluation never perturbs a training run's determinism
EvalSummary EvaluatePolicy(Environment& env, const DynamicsModel& model,
                           const PlannerConfig& config, int episodes, uint64_t seed,
                           std::vector<EpisodeLog>* logs = nullptr);

}  // namespace pddm

#endif  // PDDM_AGENT_H_

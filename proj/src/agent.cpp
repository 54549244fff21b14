#include "pddm/agent.hpp"

#include <cmath>
#include <stdexcept>

#include "pddm/normalization.hpp"

namespace pddm {

namespace {

// named sub-streams fanned out of the experiment seed
enum SeedStream : uint64_t {
  kStreamModelInit = 1,
  kStreamPlanning = 2,
  kStreamTraining = 3,
  kStreamReinit = 4,
  kStreamResets = 5,
  kStreamEvalPlanning = 6,
  kStreamEvalResets = 7,
};

// success = the instantaneous predicate held for SuccessHoldSteps()
// consecutive states, counting the reset state and every state stepped into
class SuccessTracker {
 public:
  SuccessTracker(const Environment& env) : need_(env.SuccessHoldSteps()) {}

  void Observe(const Environment& env, const Eigen::VectorXd& state) {
    streak_ = env.Success(state) ? streak_ + 1 : 0;
    achieved_ = achieved_ || streak_ >= need_;
  }

  bool achieved() const { return achieved_; }

 private:
  int need_;
  int streak_ = 0;
  bool achieved_ = false;
};

}  // namespace

void ExperimentConfig::Validate(int action_dim) const {
  if (iterations < 1) throw std::invalid_argument("experiment.I must be >= 1");
  if (rollouts_per_iter < 1) throw std::invalid_argument("experiment.R must be >= 1");
  if (steps_per_rollout < 1) throw std::invalid_argument("experiment.T must be >= 1");
  if (train_epochs < 1) throw std::invalid_argument("experiment.E must be >= 1");
  if (ensemble_size < 1) throw std::invalid_argument("model.M must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("model.batch_size must be >= 1");
  if (!(learning_rate >= 0.0)) throw std::invalid_argument("model.learning_rate must be >= 0");
  for (int width : hidden) {
    if (width < 1) throw std::invalid_argument("model.hidden widths must be >= 1");
  }
  planner.Validate(action_dim);
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> MpcStep(const Eigen::VectorXd& state,
                                                    const DynamicsModel& model,
                                                    const Environment& env,
                                                    const PlannerConfig& config,
                                                    const Eigen::MatrixXd& mu_prev, Rng& rng) {
  PlanResult result = Plan(model, env, state, config, mu_prev, rng);
  return {result.action, result.next_mean};
}

EpisodeLog RunEpisode(Environment& env, const DynamicsModel& model, const PlannerConfig& config,
                      uint64_t reset_seed, Rng& plan_rng, int iteration, int episode,
                      TransitionDataset* dataset) {
  EpisodeLog log;
  log.iteration = iteration;
  log.episode = episode;

  Eigen::VectorXd state = env.Reset(reset_seed);
  SuccessTracker tracker(env);
  tracker.Observe(env, state);

  Eigen::MatrixXd warm_start;  // empty = start from a zero mean
  for (int t = 0; t < env.horizon(); ++t) {
    auto [action, next_mean] = MpcStep(state, model, env, config, warm_start, plan_rng);
    warm_start = std::move(next_mean);

    auto [next_state, done] = env.Step(action);

    StepRecord record;
    record.state = state;
    record.action = action;
    record.reward = env.Reward(state, action);
    if (env.Failure(next_state)) {
      record.reward += env.FailurePenalty();
    }
    record.done = done;
    log.episode_return += record.reward;
    log.steps.push_back(std::move(record));

    if (dataset != nullptr) {
      dataset->Append(state, action, next_state, iteration, episode);
    }
    tracker.Observe(env, next_state);
    state = next_state;
    if (done) break;
  }
  log.success = tracker.achieved();
  return log;
}

ExperimentResult RunExperiment(Environment& env, const ExperimentConfig& config) {
  config.Validate(env.ActionDim());
  env.set_horizon(config.steps_per_rollout);

  ModelEnsemble ensemble =
      ModelEnsemble::Init(env.StateDim(), env.ActionDim(), config.hidden, config.ensemble_size,
                          DeriveSeed(config.seed, kStreamModelInit), config.learning_rate);

  ExperimentResult result{std::move(ensemble),
                          TransitionDataset(env.StateDim(), env.ActionDim()),
                          {},
                          {},
                          0};

  Rng plan_rng(DeriveSeed(config.seed, kStreamPlanning));
  Rng train_rng(DeriveSeed(config.seed, kStreamTraining));
  const uint64_t reset_base = DeriveSeed(config.seed, kStreamResets);
  const uint64_t reinit_base = DeriveSeed(config.seed, kStreamReinit);

  int global_episode = 0;
  for (int iter = 0; iter < config.iterations; ++iter) {
    if (iter > 0 && !config.warmstart_weights) {
      // ablation mode: fresh weights every iteration, deterministic per seed
      NormalizationStats stats = result.ensemble.stats();
      result.ensemble = ModelEnsemble::Init(
          env.StateDim(), env.ActionDim(), config.hidden, config.ensemble_size,
          DeriveSeed(reinit_base, static_cast<uint64_t>(iter)), config.learning_rate);
      result.ensemble.SetStats(stats);
    }

    // collect with the current model (untrained at iteration 0)
    for (int rollout = 0; rollout < config.rollouts_per_iter; ++rollout) {
      EpisodeLog log = RunEpisode(env, result.ensemble, config.planner,
                                  DeriveSeed(reset_base, static_cast<uint64_t>(global_episode)),
                                  plan_rng, iter, global_episode, &result.dataset);
      result.total_env_steps += log.Length();
      result.episodes.push_back(std::move(log));
      ++global_episode;
    }

    // refit normalization on everything collected so far, then train; the
    // stats stay frozen until this point next iteration
    result.ensemble.SetStats(FitNormalization(result.dataset));
    for (int epoch = 0; epoch < config.train_epochs; ++epoch) {
      Eigen::VectorXd losses = result.ensemble.TrainEpoch(result.dataset, config.batch_size,
                                                          train_rng);
      for (int m = 0; m < losses.size(); ++m) {
        result.losses.push_back({iter, epoch, m, losses[m]});
      }
    }
  }
  return result;
}

EvalSummary EvaluatePolicy(Environment& env, const DynamicsModel& model,
                           const PlannerConfig& config, int episodes, uint64_t seed,
                           std::vector<EpisodeLog>* logs) {
  if (episodes < 1) throw std::invalid_argument("EvaluatePolicy: episodes must be >= 1");
  config.Validate(env.ActionDim());

  Rng plan_rng(DeriveSeed(seed, kStreamEvalPlanning));
  const uint64_t reset_base = DeriveSeed(seed, kStreamEvalResets);

  EvalSummary summary;
  summary.episodes = episodes;
  double sum_return = 0.0, sum_sq = 0.0, sum_length = 0.0;
  for (int i = 0; i < episodes; ++i) {
    EpisodeLog log = RunEpisode(env, model, config, DeriveSeed(reset_base, i), plan_rng,
                                /*iteration=*/0, /*episode=*/i, /*dataset=*/nullptr);
    summary.successes += log.success ? 1 : 0;
    sum_return += log.episode_return;
    sum_sq += log.episode_return * log.episode_return;
    sum_length += log.Length();
    if (logs != nullptr) logs->push_back(std::move(log));
  }
  summary.success_rate = static_cast<double>(summary.successes) / episodes;
  summary.mean_return = sum_return / episodes;
  double variance = episodes > 1
                        ? (sum_sq - episodes * summary.mean_return * summary.mean_return) /
                              (episodes - 1)
                        : 0.0;
  summary.return_std = std::sqrt(std::max(0.0, variance));
  summary.mean_length = sum_length / episodes;

  // Wilson 95% score interval
  const double z = 1.959963984540054;
  const double n = episodes;
  const double p = summary.success_rate;
  const double denom = 1.0 + z * z / n;
  const double center = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  summary.ci_low = std::max(0.0, center - half);
  summary.ci_high = std::min(1.0, center + half);
  return summary;
}

}  // namespace pddm

#ifndef PDDM_PLANNERS_H_
#define PDDM_PLANNERS_H_

#include <Eigen/Core>
#include <string>
#include <vector>

#include "pddm/dynamics_model.hpp"
#include "pddm/environment.hpp"
#include "pddm/rng.hpp"

namespace pddm {

// candidates whose model rollout leaves the finite range are scored with this
// sentinel instead of crashing; it loses every comparison and gets softmax
// weight zero after max-subtraction
inline constexpr double kNonFiniteReturn = -1e18;

enum class PlannerKind { kRandomShooting, kCem, kPddm };

PlannerKind PlannerKindFromString(const std::string& name);
std::string PlannerKindToString(PlannerKind kind);

struct PlannerConfig {
  PlannerKind kind = PlannerKind::kPddm;
  int horizon = 7;          // H: steps looked ahead per candidate
  int num_candidates = 700; // N: action sequences sampled per refinement

  // reward-weighted refinement
  double gamma = 10.0;  // softmax temperature on candidate returns
  double beta = 0.7;    // filtering coefficient mixing fresh noise into the previous step's

  // cross-entropy refinement
  int elite_count = 20;   // J: candidates kept per iteration
  double alpha = 1.0;     // blend of elite stats into the sampling distribution
  int cem_iters = 4;      // sampling/refit rounds per planning call

  // std of the candidate noise; one entry broadcasts to every action
  // dimension, otherwise one entry per dimension
  std::vector<double> sample_std = {0.4};

  // keep the final candidate batch in the PlanResult (tests/diagnostics)
  bool record_candidates = false;

  // throws std::invalid_argument naming the offending field
  void Validate(int action_dim) const;

  // sample_std resolved to one entry per action dimension
  Eigen::VectorXd SampleStdVector(int action_dim) const;
};

// one candidate plan: rows are timesteps, columns action dimensions, every
// entry clamped to [-1, 1]
using ActionSequence = Eigen::MatrixXd;

struct CandidateBatch {
  std::vector<ActionSequence> sequences;
  Eigen::VectorXd returns;         // ensemble-mean return per candidate
  Eigen::MatrixXd member_returns;  // (candidates x members), per-member returns

  int size() const { return static_cast<int>(sequences.size()); }
};

struct PlanResult {
  Eigen::VectorXd action;    // first action of the refined plan, clamped
  Eigen::MatrixXd mean;      // the refined mean sequence (horizon x action_dim)
  Eigen::MatrixXd next_mean; // warm start for the next call (zeros if the planner is memoryless)
  double best_return = 0.0;  // highest candidate return seen in the final batch
  double member_spread = 0.0; // mean over candidates of max-min across member returns
  CandidateBatch batch;      // only filled when record_candidates is set
};

// rolls every candidate through every model member from s0, summing
// env.Reward(state, action) along the way. a predicted state that trips
// env.Failure earns env.FailurePenalty() once and freezes; a non-finite
// prediction replaces that candidate's member return with kNonFiniteReturn.
// fills batch.returns (mean over members) and batch.member_returns.
void EvaluateCandidates(const DynamicsModel& model, const Environment& env,
                        const Eigen::VectorXd& s0, CandidateBatch& batch);

// softmax weights exp(gamma * returns) / sum, computed with max-subtraction
Eigen::VectorXd SoftmaxWeights(const Eigen::VectorXd& returns, double gamma);

// per-timestep reward-weighted average of the candidates:
//   mu_t = sum_k exp(gamma R_k) a_t^(k) / sum_j exp(gamma R_j)
Eigen::MatrixXd RewardWeightedUpdate(const CandidateBatch& batch, double gamma);

// the smoothing recursion itself: n_t = beta * u_t + (1 - beta) * n_{t-1}
// applied row by row to a (horizon x action_dim) input sequence, starting
// from n_prev (one row; empty means zeros)
Eigen::MatrixXd ApplyNoiseFilter(const Eigen::MatrixXd& u, double beta,
                                 const Eigen::RowVectorXd& n_prev = Eigen::RowVectorXd());

// time-correlated candidate noise: u_t ~ N(0, diag(sample_std^2)) iid, run
// through ApplyNoiseFilter with n_{-1} = 0. n_prev (num_candidates x
// action_dim) seeds n_{-1}; pass an empty matrix for zeros. draws are ordered
// candidate-major, then time, then dimension, so a fixed rng stream yields a
// fixed batch regardless of later parallelism.
std::vector<Eigen::MatrixXd> SampleFilteredNoise(const PlannerConfig& config, int action_dim,
                                                 Rng& rng,
                                                 const Eigen::MatrixXd& n_prev = Eigen::MatrixXd());

// per-(timestep, dimension) sampling distribution for the cross-entropy method
struct CemDistribution {
  Eigen::MatrixXd mean;      // (horizon x action_dim)
  Eigen::MatrixXd variance;  // (horizon x action_dim), floored at kVarianceFloor
  static constexpr double kVarianceFloor = 1e-10;
};

// selects the elite_count best candidates (ties broken toward lower index)
// and blends their per-timestep mean/variance into the distribution:
//   mu    <- alpha * mean(elites) + (1 - alpha) * mu
//   sigma2 <- alpha * var(elites)  + (1 - alpha) * sigma2   (population variance)
// returns the elite indices in selection order.
std::vector<int> CemUpdate(CemDistribution& dist, const CandidateBatch& batch, int elite_count,
                           double alpha);

// N iid uniform [-1, 1] sequences, executes the argmax (lowest index wins
// ties); memoryless, so next_mean is zeros
PlanResult RandomShootingPlan(const DynamicsModel& model, const Environment& env,
                              const Eigen::VectorXd& s0, const PlannerConfig& config, Rng& rng);

// cem_iters rounds of sample / evaluate / refit starting from mu = 0,
// sigma2 = sample_std^2; returns the final mean (memoryless)
PlanResult CemPlan(const DynamicsModel& model, const Environment& env, const Eigen::VectorXd& s0,
                   const PlannerConfig& config, Rng& rng);

// one reward-weighted refinement around the warm-started mean: candidates are
// clamp(mu_prev + filtered noise), the refined mean is their softmax-weighted
// average, and next_mean is that mean shifted one step with a zero row at the
// end. mu_prev empty (or null) starts from zeros.
PlanResult PddmPlan(const DynamicsModel& model, const Environment& env, const Eigen::VectorXd& s0,
                    const PlannerConfig& config, const Eigen::MatrixXd& mu_prev, Rng& rng);

// dispatch on config.kind; mu_prev is ignored by the memoryless planners
PlanResult Plan(const DynamicsModel& model, const Environment& env, const Eigen::VectorXd& s0,
                const PlannerConfig& config, const Eigen::MatrixXd& mu_prev, Rng& rng);

}  // namespace pddm

#endif  // PDDM_PLANNERS_H_

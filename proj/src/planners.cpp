#include "pddm/planners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pddm {

namespace {

Eigen::MatrixXd ClampActions(Eigen::MatrixXd actions) {
  return actions.cwiseMax(-1.0).cwiseMin(1.0);
}

// indices sorted by return, best first, ties toward the lower index
std::vector<int> ArgsortDescending(const Eigen::VectorXd& returns) {
  std::vector<int> order(returns.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (returns[a] != returns[b]) return returns[a] > returns[b];
    return a < b;
  });
  return order;
}

double MemberSpread(const Eigen::MatrixXd& member_returns) {
  if (member_returns.cols() < 2 || member_returns.rows() == 0) return 0.0;
  return (member_returns.rowwise().maxCoeff() - member_returns.rowwise().minCoeff()).mean();
}

PlanResult FinishResult(const PlannerConfig& config, Eigen::MatrixXd mean, double best_return,
                        const Eigen::MatrixXd& next_mean, CandidateBatch&& batch) {
  PlanResult result;
  result.mean = ClampActions(std::move(mean));
  result.action = result.mean.row(0).transpose();
  result.next_mean = next_mean;
  result.best_return = best_return;
  result.member_spread = MemberSpread(batch.member_returns);
  if (config.record_candidates) {
    result.batch = std::move(batch);
  }
  return result;
}

}  // namespace

PlannerKind PlannerKindFromString(const std::string& name) {
  if (name == "random_shooting") return PlannerKind::kRandomShooting;
  if (name == "cem") return PlannerKind::kCem;
  if (name == "pddm") return PlannerKind::kPddm;
  throw std::invalid_argument("unknown planner '" + name +
                              "'; available: random_shooting cem pddm");
}

std::string PlannerKindToString(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::kRandomShooting: return "random_shooting";
    case PlannerKind::kCem: return "cem";
    case PlannerKind::kPddm: return "pddm";
  }
  throw std::invalid_argument("unknown planner kind");
}

void PlannerConfig::Validate(int action_dim) const {
  if (horizon < 1) throw std::invalid_argument("planner.H must be >= 1");
  if (num_candidates < 1) throw std::invalid_argument("planner.N must be >= 1");
  if (gamma < 0.0) throw std::invalid_argument("planner.gamma must be >= 0");
  if (beta <= 0.0 || beta > 1.0) throw std::invalid_argument("planner.beta must be in (0, 1]");
  if (kind == PlannerKind::kCem) {
    if (elite_count < 1 || elite_count > num_candidates) {
      throw std::invalid_argument("planner.J must be in [1, N]");
    }
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("planner.alpha must be in [0, 1]");
    if (cem_iters < 1) throw std::invalid_argument("planner.cem_iters must be >= 1");
  }
  if (sample_std.empty() ||
      (sample_std.size() != 1 && sample_std.size() != static_cast<size_t>(action_dim))) {
    throw std::invalid_argument(
        "planner.sample_std needs one entry or one per action dimension");
  }
  for (double s : sample_std) {
    if (!(s > 0.0)) throw std::invalid_argument("planner.sample_std entries must be > 0");
  }
}

Eigen::VectorXd PlannerConfig::SampleStdVector(int action_dim) const {
  Eigen::VectorXd std_vec(action_dim);
  for (int d = 0; d < action_dim; ++d) {
    std_vec[d] = sample_std.size() == 1 ? sample_std[0] : sample_std[d];
  }
  return std_vec;
}

void EvaluateCandidates(const DynamicsModel& model, const Environment& env,
                        const Eigen::VectorXd& s0, CandidateBatch& batch) {
  const int n = batch.size();
  const int members = model.NumMembers();
  if (n == 0) throw std::invalid_argument("EvaluateCandidates: empty batch");
  if (!s0.allFinite() || s0.size() != model.StateDim()) {
    throw std::invalid_argument("EvaluateCandidates: bad start state");
  }
  const int horizon = static_cast<int>(batch.sequences.front().rows());
  const int action_dim = static_cast<int>(batch.sequences.front().cols());

  batch.member_returns = Eigen::MatrixXd::Zero(n, members);

  Eigen::MatrixXd states(n, s0.size());
  Eigen::MatrixXd actions(n, action_dim);
  Eigen::MatrixXd next_states;
  std::vector<char> frozen(n);

  for (int m = 0; m < members; ++m) {
    states = s0.transpose().replicate(n, 1);
    std::fill(frozen.begin(), frozen.end(), 0);
    for (int t = 0; t < horizon; ++t) {
      for (int k = 0; k < n; ++k) {
        actions.row(k) = batch.sequences[k].row(t);
        if (!frozen[k]) {
          batch.member_returns(k, m) +=
              env.Reward(states.row(k).transpose(), actions.row(k).transpose());
        }
      }
      model.PredictNextBatch(m, states, actions, next_states);
      for (int k = 0; k < n; ++k) {
        if (frozen[k]) {
          next_states.row(k) = states.row(k);  // hold the frozen state
          continue;
        }
        if (!next_states.row(k).allFinite()) {
          batch.member_returns(k, m) = kNonFiniteReturn;
          next_states.row(k) = states.row(k);
          frozen[k] = 1;
        } else if (env.Failure(next_states.row(k).transpose())) {
          batch.member_returns(k, m) += env.FailurePenalty();
          frozen[k] = 1;
        }
      }
      states.swap(next_states);
    }
  }
  batch.returns = batch.member_returns.rowwise().mean();
}

Eigen::VectorXd SoftmaxWeights(const Eigen::VectorXd& returns, double gamma) {
  if (returns.size() == 0) throw std::invalid_argument("SoftmaxWeights: empty returns");
  Eigen::ArrayXd scaled = gamma * returns.array();
  Eigen::ArrayXd shifted = scaled - scaled.maxCoeff();
  // scalar exp, not Eigen's packet exp: the packet version clamps its argument
  // near -709, which would hand hopeless candidates (the non-finite sentinel)
  // a denormal weight instead of exactly zero
  Eigen::ArrayXd weights = shifted.unaryExpr([](double x) { return std::exp(x); });
  return (weights / weights.sum()).matrix();
}

Eigen::MatrixXd RewardWeightedUpdate(const CandidateBatch& batch, double gamma) {
  if (batch.size() == 0) throw std::invalid_argument("RewardWeightedUpdate: empty batch");
  Eigen::VectorXd weights = SoftmaxWeights(batch.returns, gamma);
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(batch.sequences.front().rows(),
                                               batch.sequences.front().cols());
  for (int k = 0; k < batch.size(); ++k) {
    mean += weights[k] * batch.sequences[k];
  }
  return mean;
}

Eigen::MatrixXd ApplyNoiseFilter(const Eigen::MatrixXd& u, double beta,
                                 const Eigen::RowVectorXd& n_prev) {
  if (n_prev.size() > 0 && n_prev.cols() != u.cols()) {
    throw std::invalid_argument("ApplyNoiseFilter: n_prev width mismatch");
  }
  Eigen::MatrixXd filtered(u.rows(), u.cols());
  Eigen::RowVectorXd previous =
      n_prev.size() > 0 ? n_prev : Eigen::RowVectorXd::Zero(u.cols()).eval();
  for (int t = 0; t < u.rows(); ++t) {
    filtered.row(t) = beta * u.row(t) + (1.0 - beta) * previous;
    previous = filtered.row(t);
  }
  return filtered;
}

std::vector<Eigen::MatrixXd> SampleFilteredNoise(const PlannerConfig& config, int action_dim,
                                                 Rng& rng, const Eigen::MatrixXd& n_prev) {
  const Eigen::VectorXd std_vec = config.SampleStdVector(action_dim);
  const bool seeded = n_prev.size() > 0;
  if (seeded && (n_prev.rows() != config.num_candidates || n_prev.cols() != action_dim)) {
    throw std::invalid_argument("SampleFilteredNoise: n_prev shape mismatch");
  }
  std::vector<Eigen::MatrixXd> noise(config.num_candidates);
  for (int k = 0; k < config.num_candidates; ++k) {
    Eigen::MatrixXd u(config.horizon, action_dim);
    for (int t = 0; t < config.horizon; ++t) {
      for (int d = 0; d < action_dim; ++d) {
        u(t, d) = rng.Gaussian() * std_vec[d];
      }
    }
    noise[k] = ApplyNoiseFilter(
        u, config.beta, seeded ? Eigen::RowVectorXd(n_prev.row(k)) : Eigen::RowVectorXd());
  }
  return noise;
}

std::vector<int> CemUpdate(CemDistribution& dist, const CandidateBatch& batch, int elite_count,
                           double alpha) {
  if (elite_count < 1 || elite_count > batch.size()) {
    throw std::invalid_argument("CemUpdate: elite_count out of range");
  }
  std::vector<int> order = ArgsortDescending(batch.returns);
  order.resize(elite_count);

  Eigen::MatrixXd elite_mean = Eigen::MatrixXd::Zero(dist.mean.rows(), dist.mean.cols());
  for (int idx : order) elite_mean += batch.sequences[idx];
  elite_mean /= static_cast<double>(elite_count);

  Eigen::MatrixXd elite_var = Eigen::MatrixXd::Zero(dist.mean.rows(), dist.mean.cols());
  for (int idx : order) {
    elite_var += (batch.sequences[idx] - elite_mean).array().square().matrix();
  }
  elite_var /= static_cast<double>(elite_count);

  dist.mean = alpha * elite_mean + (1.0 - alpha) * dist.mean;
  dist.variance = (alpha * elite_var + (1.0 - alpha) * dist.variance)
                      .cwiseMax(CemDistribution::kVarianceFloor);
  return order;
}

PlanResult RandomShootingPlan(const DynamicsModel& model, const Environment& env,
                              const Eigen::VectorXd& s0, const PlannerConfig& config, Rng& rng) {
  const int action_dim = model.ActionDim();
  config.Validate(action_dim);

  CandidateBatch batch;
  batch.sequences.resize(config.num_candidates);
  for (int k = 0; k < config.num_candidates; ++k) {
    Eigen::MatrixXd seq(config.horizon, action_dim);
    for (int t = 0; t < config.horizon; ++t) {
      for (int d = 0; d < action_dim; ++d) {
        seq(t, d) = rng.Uniform(-1.0, 1.0);
      }
    }
    batch.sequences[k] = std::move(seq);
  }
  EvaluateCandidates(model, env, s0, batch);

  // argmax, lowest index on ties
  int best = 0;
  for (int k = 1; k < batch.size(); ++k) {
    if (batch.returns[k] > batch.returns[best]) best = k;
  }
  Eigen::MatrixXd zeros = Eigen::MatrixXd::Zero(config.horizon, action_dim);
  return FinishResult(config, batch.sequences[best], batch.returns[best], zeros,
                      std::move(batch));
}

PlanResult CemPlan(const DynamicsModel& model, const Environment& env, const Eigen::VectorXd& s0,
                   const PlannerConfig& config, Rng& rng) {
  const int action_dim = model.ActionDim();
  config.Validate(action_dim);
  const Eigen::VectorXd std_vec = config.SampleStdVector(action_dim);

  CemDistribution dist;
  dist.mean = Eigen::MatrixXd::Zero(config.horizon, action_dim);
  dist.variance = std_vec.array().square().matrix().transpose().replicate(config.horizon, 1);

  CandidateBatch batch;
  double best_return = kNonFiniteReturn;
  for (int iter = 0; iter < config.cem_iters; ++iter) {
    batch = CandidateBatch();
    batch.sequences.resize(config.num_candidates);
    for (int k = 0; k < config.num_candidates; ++k) {
      Eigen::MatrixXd seq(config.horizon, action_dim);
      for (int t = 0; t < config.horizon; ++t) {
        for (int d = 0; d < action_dim; ++d) {
          seq(t, d) = dist.mean(t, d) + rng.Gaussian() * std::sqrt(dist.variance(t, d));
        }
      }
      batch.sequences[k] = ClampActions(std::move(seq));
    }
    EvaluateCandidates(model, env, s0, batch);
    best_return = std::max(best_return, batch.returns.maxCoeff());
    CemUpdate(dist, batch, config.elite_count, config.alpha);
  }
  Eigen::MatrixXd zeros = Eigen::MatrixXd::Zero(config.horizon, action_dim);
  return FinishResult(config, dist.mean, best_return, zeros, std::move(batch));
}

PlanResult PddmPlan(const DynamicsModel& model, const Environment& env, const Eigen::VectorXd& s0,
                    const PlannerConfig& config, const Eigen::MatrixXd& mu_prev, Rng& rng) {
  const int action_dim = model.ActionDim();
  config.Validate(action_dim);

  Eigen::MatrixXd mu = mu_prev.size() > 0
                           ? mu_prev
                           : Eigen::MatrixXd::Zero(config.horizon, action_dim);
  if (mu.rows() != config.horizon || mu.cols() != action_dim) {
    throw std::invalid_argument("PddmPlan: warm-start mean shape mismatch");
  }

  std::vector<Eigen::MatrixXd> noise = SampleFilteredNoise(config, action_dim, rng);
  CandidateBatch batch;
  batch.sequences.resize(config.num_candidates);
  for (int k = 0; k < config.num_candidates; ++k) {
    batch.sequences[k] = ClampActions(mu + noise[k]);
  }
  EvaluateCandidates(model, env, s0, batch);

  Eigen::MatrixXd refined = RewardWeightedUpdate(batch, config.gamma);

  // warm start: drop the executed step, pad with a zero action
  Eigen::MatrixXd shifted = Eigen::MatrixXd::Zero(config.horizon, action_dim);
  if (config.horizon > 1) {
    shifted.topRows(config.horizon - 1) = refined.bottomRows(config.horizon - 1);
  }
  return FinishResult(config, refined, batch.returns.maxCoeff(), shifted, std::move(batch));
}

PlanResult Plan(const DynamicsModel& model, const Environment& env, const Eigen::VectorXd& s0,
                const PlannerConfig& config, const Eigen::MatrixXd& mu_prev, Rng& rng) {
  switch (config.kind) {
    case PlannerKind::kRandomShooting: return RandomShootingPlan(model, env, s0, config, rng);
    case PlannerKind::kCem: return CemPlan(model, env, s0, config, rng);
    case PlannerKind::kPddm: return PddmPlan(model, env, s0, config, mu_prev, rng);
  }
  throw std::invalid_argument("Plan: unknown planner kind");
}

}  // namespace pddm

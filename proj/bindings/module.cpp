// python bindings for the core operations: environments, ensemble models,
// planners, the online loop, evaluation, and checkpoints

#include <optional>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pddm/agent.hpp"
#include "pddm/checkpoint.hpp"
#include "pddm/config.hpp"
#include "pddm/harness.hpp"
#include "pddm/version.hpp"

namespace py = pybind11;
using namespace pddm;

namespace {

Eigen::MatrixXd MeanOrEmpty(const std::optional<Eigen::MatrixXd>& mu) {
  return mu.has_value() ? *mu : Eigen::MatrixXd();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "ensemble dynamics models + sampling-based MPC";
  m.attr("__version__") = CodeVersion();

  py::class_<Rng>(m, "Rng")
      .def(py::init<uint64_t>(), py::arg("seed"))
      .def("uniform", py::overload_cast<>(&Rng::Uniform))
      .def("uniform", py::overload_cast<double, double>(&Rng::Uniform))
      .def("gaussian", &Rng::Gaussian);
  m.def("derive_seed", &DeriveSeed, py::arg("base"), py::arg("stream"));

  py::class_<NormalizationStats>(m, "NormalizationStats")
      .def_readonly("state_mean", &NormalizationStats::state_mean)
      .def_readonly("state_std", &NormalizationStats::state_std)
      .def_readonly("action_mean", &NormalizationStats::action_mean)
      .def_readonly("action_std", &NormalizationStats::action_std)
      .def_readonly("delta_mean", &NormalizationStats::delta_mean)
      .def_readonly("delta_std", &NormalizationStats::delta_std)
      .def_static("identity", &NormalizationStats::Identity, py::arg("state_dim"),
                  py::arg("action_dim"));

  py::class_<TransitionDataset>(m, "TransitionDataset")
      .def(py::init<int, int>(), py::arg("state_dim"), py::arg("action_dim"))
      .def("append", &TransitionDataset::Append, py::arg("state"), py::arg("action"),
           py::arg("next_state"), py::arg("iteration") = 0, py::arg("episode") = 0)
      .def("__len__", &TransitionDataset::size)
      .def_property_readonly("state_dim", &TransitionDataset::state_dim)
      .def_property_readonly("action_dim", &TransitionDataset::action_dim)
      .def("states", [](const TransitionDataset& d) { return Eigen::MatrixXd(d.states()); })
      .def("actions", [](const TransitionDataset& d) { return Eigen::MatrixXd(d.actions()); })
      .def("next_states",
           [](const TransitionDataset& d) { return Eigen::MatrixXd(d.next_states()); });
  m.def("fit_normalization", &FitNormalization, py::arg("dataset"));

  py::class_<DynamicsModel>(m, "DynamicsModel")
      .def_property_readonly("num_members", &DynamicsModel::NumMembers)
      .def_property_readonly("state_dim", &DynamicsModel::StateDim)
      .def_property_readonly("action_dim", &DynamicsModel::ActionDim);

  py::class_<ModelEnsemble, DynamicsModel>(m, "ModelEnsemble")
      .def_static("init", &ModelEnsemble::Init, py::arg("state_dim"), py::arg("action_dim"),
                  py::arg("hidden"), py::arg("num_members"), py::arg("seed"),
                  py::arg("learning_rate") = 1e-3)
      .def_property_readonly("stats", &ModelEnsemble::stats)
      .def("set_stats", &ModelEnsemble::SetStats, py::arg("stats"))
      .def("forward_normalized_delta", &ModelEnsemble::ForwardNormalizedDelta, py::arg("member"),
           py::arg("state"), py::arg("action"))
      .def("predict_next", &ModelEnsemble::PredictNext, py::arg("member"), py::arg("state"),
           py::arg("action"))
      .def("train_epoch", &ModelEnsemble::TrainEpoch, py::arg("dataset"), py::arg("batch_size"),
           py::arg("rng"));

  m.def("save_checkpoint", &SaveCheckpoint, py::arg("ensemble"), py::arg("path"));
  m.def("load_checkpoint", &LoadCheckpoint, py::arg("path"));

  py::class_<Environment>(m, "Environment")
      .def_property_readonly("name", &Environment::Name)
      .def_property_readonly("state_dim", &Environment::StateDim)
      .def_property_readonly("action_dim", &Environment::ActionDim)
      .def_property_readonly("dt", &Environment::Dt)
      .def_property_readonly("failure_penalty", &Environment::FailurePenalty)
      .def_property_readonly("success_hold_steps", &Environment::SuccessHoldSteps)
      .def_property_readonly("horizon", &Environment::horizon)
      .def("set_horizon", &Environment::set_horizon, py::arg("horizon"))
      .def("reward", &Environment::Reward, py::arg("state"), py::arg("action"))
      .def("success", &Environment::Success, py::arg("state"))
      .def("failure", &Environment::Failure, py::arg("state"))
      .def("transition", &Environment::Transition, py::arg("state"), py::arg("action"))
      .def("reset", &Environment::Reset, py::arg("seed"))
      .def("step", &Environment::Step, py::arg("action"))
      .def("set_state", &Environment::SetState, py::arg("state"))
      .def_property_readonly("state", &Environment::state);

  m.def("make_environment", &MakeEnvironment, py::arg("name"),
        py::arg("overrides") = std::map<std::string, double>());
  m.def("environment_names", &EnvironmentNames);
  m.def("toy_valve_reward_from_distance", &ToyValveRewardFromDistance, py::arg("distance"));

  py::class_<OracleModel, DynamicsModel>(m, "OracleModel")
      .def(py::init<const Environment&>(), py::arg("env"), py::keep_alive<1, 2>());

  py::enum_<PlannerKind>(m, "PlannerKind")
      .value("RANDOM_SHOOTING", PlannerKind::kRandomShooting)
      .value("CEM", PlannerKind::kCem)
      .value("PDDM", PlannerKind::kPddm);

  py::class_<PlannerConfig>(m, "PlannerConfig")
      .def(py::init<>())
      .def_readwrite("kind", &PlannerConfig::kind)
      .def_readwrite("horizon", &PlannerConfig::horizon)
      .def_readwrite("num_candidates", &PlannerConfig::num_candidates)
      .def_readwrite("gamma", &PlannerConfig::gamma)
      .def_readwrite("beta", &PlannerConfig::beta)
      .def_readwrite("elite_count", &PlannerConfig::elite_count)
      .def_readwrite("alpha", &PlannerConfig::alpha)
      .def_readwrite("cem_iters", &PlannerConfig::cem_iters)
      .def_readwrite("sample_std", &PlannerConfig::sample_std)
      .def_readwrite("record_candidates", &PlannerConfig::record_candidates)
      .def("validate", &PlannerConfig::Validate, py::arg("action_dim"));

  py::class_<CandidateBatch>(m, "CandidateBatch")
      .def_readonly("sequences", &CandidateBatch::sequences)
      .def_readonly("returns", &CandidateBatch::returns)
      .def_readonly("member_returns", &CandidateBatch::member_returns)
      .def("__len__", &CandidateBatch::size);

  py::class_<PlanResult>(m, "PlanResult")
      .def_readonly("action", &PlanResult::action)
      .def_readonly("mean", &PlanResult::mean)
      .def_readonly("next_mean", &PlanResult::next_mean)
      .def_readonly("best_return", &PlanResult::best_return)
      .def_readonly("member_spread", &PlanResult::member_spread)
      .def_readonly("batch", &PlanResult::batch);

  m.def("softmax_weights", &SoftmaxWeights, py::arg("returns"), py::arg("gamma"));
  m.def(
      "reward_weighted_update",
      [](const CandidateBatch& batch, double gamma) { return RewardWeightedUpdate(batch, gamma); },
      py::arg("batch"), py::arg("gamma"));
  m.def(
      "sample_filtered_noise",
      [](const PlannerConfig& config, int action_dim, Rng& rng,
         const std::optional<Eigen::MatrixXd>& n_prev) {
        return SampleFilteredNoise(config, action_dim, rng, MeanOrEmpty(n_prev));
      },
      py::arg("config"), py::arg("action_dim"), py::arg("rng"), py::arg("n_prev") = std::nullopt);
  m.def(
      "plan",
      [](const DynamicsModel& model, const Environment& env, const Eigen::VectorXd& s0,
         const PlannerConfig& config, const std::optional<Eigen::MatrixXd>& mu_prev, Rng& rng) {
        return Plan(model, env, s0, config, MeanOrEmpty(mu_prev), rng);
      },
      py::arg("model"), py::arg("env"), py::arg("s0"), py::arg("config"),
      py::arg("mu_prev") = std::nullopt, py::arg("rng"));
  m.def(
      "mpc_step",
      [](const Eigen::VectorXd& state, const DynamicsModel& model, const Environment& env,
         const PlannerConfig& config, const std::optional<Eigen::MatrixXd>& mu_prev, Rng& rng) {
        return MpcStep(state, model, env, config, MeanOrEmpty(mu_prev), rng);
      },
      py::arg("state"), py::arg("model"), py::arg("env"), py::arg("config"),
      py::arg("mu_prev") = std::nullopt, py::arg("rng"));

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("iterations", &ExperimentConfig::iterations)
      .def_readwrite("rollouts_per_iter", &ExperimentConfig::rollouts_per_iter)
      .def_readwrite("steps_per_rollout", &ExperimentConfig::steps_per_rollout)
      .def_readwrite("train_epochs", &ExperimentConfig::train_epochs)
      .def_readwrite("hidden", &ExperimentConfig::hidden)
      .def_readwrite("ensemble_size", &ExperimentConfig::ensemble_size)
      .def_readwrite("batch_size", &ExperimentConfig::batch_size)
      .def_readwrite("learning_rate", &ExperimentConfig::learning_rate)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("warmstart_weights", &ExperimentConfig::warmstart_weights)
      .def_readwrite("planner", &ExperimentConfig::planner);

  py::class_<StepRecord>(m, "StepRecord")
      .def_readonly("state", &StepRecord::state)
      .def_readonly("action", &StepRecord::action)
      .def_readonly("reward", &StepRecord::reward)
      .def_readonly("done", &StepRecord::done);

  py::class_<EpisodeLog>(m, "EpisodeLog")
      .def_readonly("iteration", &EpisodeLog::iteration)
      .def_readonly("episode", &EpisodeLog::episode)
      .def_readonly("steps", &EpisodeLog::steps)
      .def_readonly("episode_return", &EpisodeLog::episode_return)
      .def_readonly("success", &EpisodeLog::success)
      .def("__len__", &EpisodeLog::Length);

  py::class_<TrainRecord>(m, "TrainRecord")
      .def_readonly("iteration", &TrainRecord::iteration)
      .def_readonly("epoch", &TrainRecord::epoch)
      .def_readonly("member", &TrainRecord::member)
      .def_readonly("loss", &TrainRecord::loss);

  py::class_<ExperimentResult>(m, "ExperimentResult")
      .def_readonly("ensemble", &ExperimentResult::ensemble)
      .def_readonly("dataset", &ExperimentResult::dataset)
      .def_readonly("episodes", &ExperimentResult::episodes)
      .def_readonly("losses", &ExperimentResult::losses)
      .def_readonly("total_env_steps", &ExperimentResult::total_env_steps);

  m.def("run_experiment", &RunExperiment, py::arg("env"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<EvalSummary>(m, "EvalSummary")
      .def_readonly("episodes", &EvalSummary::episodes)
      .def_readonly("successes", &EvalSummary::successes)
      .def_readonly("success_rate", &EvalSummary::success_rate)
      .def_readonly("ci_low", &EvalSummary::ci_low)
      .def_readonly("ci_high", &EvalSummary::ci_high)
      .def_readonly("mean_return", &EvalSummary::mean_return)
      .def_readonly("return_std", &EvalSummary::return_std)
      .def_readonly("mean_length", &EvalSummary::mean_length);

  m.def(
      "evaluate_policy",
      [](Environment& env, const DynamicsModel& model, const PlannerConfig& config, int episodes,
         uint64_t seed) { return EvaluatePolicy(env, model, config, episodes, seed); },
      py::arg("env"), py::arg("model"), py::arg("config"), py::arg("episodes"), py::arg("seed"),
      py::call_guard<py::gil_scoped_release>());
}

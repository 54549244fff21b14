"""Ensemble dynamics models + sampling-based MPC.

The compiled extension lives at ``pddm._core`` in an installed package. When
working from a build tree, ``_core`` sits next to the package on PYTHONPATH
(the test harness arranges this), so fall back to the top-level module.
"""

try:
    from . import _core
except ImportError:  # build-tree layout: extension next to the package
    import _core

__version__ = _core.__version__

Rng = _core.Rng
derive_seed = _core.derive_seed

NormalizationStats = _core.NormalizationStats
TransitionDataset = _core.TransitionDataset
fit_normalization = _core.fit_normalization

DynamicsModel = _core.DynamicsModel
ModelEnsemble = _core.ModelEnsemble
save_checkpoint = _core.save_checkpoint
load_checkpoint = _core.load_checkpoint

Environment = _core.Environment
OracleModel = _core.OracleModel
make_environment = _core.make_environment
environment_names = _core.environment_names
toy_valve_reward_from_distance = _core.toy_valve_reward_from_distance

PlannerKind = _core.PlannerKind
PlannerConfig = _core.PlannerConfig
CandidateBatch = _core.CandidateBatch
PlanResult = _core.PlanResult
softmax_weights = _core.softmax_weights
reward_weighted_update = _core.reward_weighted_update
sample_filtered_noise = _core.sample_filtered_noise
plan = _core.plan
mpc_step = _core.mpc_step

ExperimentConfig = _core.ExperimentConfig
StepRecord = _core.StepRecord
EpisodeLog = _core.EpisodeLog
TrainRecord = _core.TrainRecord
ExperimentResult = _core.ExperimentResult
run_experiment = _core.run_experiment
EvalSummary = _core.EvalSummary
evaluate_policy = _core.evaluate_policy

__all__ = [
    "Rng",
    "derive_seed",
    "NormalizationStats",
    "TransitionDataset",
    "fit_normalization",
    "DynamicsModel",
    "ModelEnsemble",
    "save_checkpoint",
    "load_checkpoint",
    "Environment",
    "OracleModel",
    "make_environment",
    "environment_names",
    "toy_valve_reward_from_distance",
    "PlannerKind",
    "PlannerConfig",
    "CandidateBatch",
    "PlanResult",
    "softmax_weights",
    "reward_weighted_update",
    "sample_filtered_noise",
    "plan",
    "mpc_step",
    "ExperimentConfig",
    "StepRecord",
    "EpisodeLog",
    "TrainRecord",
    "ExperimentResult",
    "run_experiment",
    "EvalSummary",
    "evaluate_policy",
]

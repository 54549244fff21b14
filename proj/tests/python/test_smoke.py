"""Smoke tests for the python bindings: every exposed operation gets one
exercise against a known answer or an internal-consistency check. Runs as a
plain script (exit code reports the result) so it needs nothing but numpy."""

import math
import os
import sys
import tempfile

import numpy as np

import pddm


def test_version_and_names():
    assert isinstance(pddm.__version__, str) and pddm.__version__
    assert pddm.environment_names() == ["pendulum", "cartpole", "reacher2", "toy_valve"]


def test_rng_determinism():
    a = pddm.Rng(42)
    b = pddm.Rng(42)
    assert [a.uniform() for _ in range(5)] == [b.uniform() for _ in range(5)]
    assert a.gaussian() == b.gaussian()
    assert pddm.derive_seed(1, 2) == pddm.derive_seed(1, 2)
    assert pddm.derive_seed(1, 2) != pddm.derive_seed(1, 3)


def test_environment_step_matches_transition():
    env = pddm.make_environment("pendulum")
    assert env.state_dim == 3 and env.action_dim == 1
    state = env.reset(7)
    action = np.array([0.5])
    predicted = env.transition(state, action)
    stepped, done = env.step(action)
    assert np.array_equal(predicted, stepped)
    assert not done
    assert env.reward(state, action) <= 0.0


def test_environment_overrides_and_valve_reward():
    heavy = pddm.make_environment("pendulum", {"mass": 2.0})
    light = pddm.make_environment("pendulum", {"mass": 0.5})
    s = heavy.reset(3)
    light.reset(3)
    a = np.array([1.0])
    assert not np.array_equal(heavy.transition(s, a), light.transition(s, a))
    assert pddm.toy_valve_reward_from_distance(0.0) == 11.0
    assert pddm.toy_valve_reward_from_distance(0.5) == -5.0


def test_dataset_and_normalization():
    data = pddm.TransitionDataset(2, 1)
    data.append(np.array([0.0, 0.0]), np.array([0.0]), np.array([2.0, 2.0]))
    data.append(np.array([2.0, 2.0]), np.array([1.0]), np.array([0.0, 0.0]))
    assert len(data) == 2
    stats = pddm.fit_normalization(data)
    assert np.allclose(stats.state_mean, [1.0, 1.0])
    assert np.allclose(stats.state_std, [1.0, 1.0])


def _pendulum_dataset(n=400, seed=5):
    env = pddm.make_environment("pendulum")
    data = pddm.TransitionDataset(env.state_dim, env.action_dim)
    rng = pddm.Rng(seed)
    state = env.reset(seed)
    for i in range(n):
        action = np.array([rng.uniform(-1.0, 1.0)])
        nxt = env.transition(state, action)
        data.append(state, action, nxt)
        state = nxt
    return env, data


def test_ensemble_training_and_checkpoint():
    env, data = _pendulum_dataset()
    ensemble = pddm.ModelEnsemble.init(env.state_dim, env.action_dim, [16, 16], 2, 11)
    ensemble.set_stats(pddm.fit_normalization(data))
    rng = pddm.Rng(12)
    first = ensemble.train_epoch(data, 100, rng)
    for _ in range(9):
        last = ensemble.train_epoch(data, 100, rng)
    assert last[0] < first[0] and last[1] < first[1]

    state = env.reset(13)
    action = np.array([0.25])
    before = ensemble.predict_next(0, state, action)
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "ensemble.ckpt")
        pddm.save_checkpoint(ensemble, path)
        loaded = pddm.load_checkpoint(path)
    assert loaded.num_members == 2
    assert np.array_equal(before, loaded.predict_next(0, state, action))


def test_reward_weighted_update_uniform_limit():
    env = pddm.make_environment("pendulum")
    oracle = pddm.OracleModel(env)
    config = pddm.PlannerConfig()
    config.kind = pddm.PlannerKind.PDDM
    config.horizon = 3
    config.num_candidates = 8
    config.record_candidates = True
    result = pddm.plan(oracle, env, env.reset(1), config, None, pddm.Rng(2))
    batch = result.batch
    assert len(batch) == 8
    mu = pddm.reward_weighted_update(batch, 0.0)
    assert np.allclose(mu, np.mean(batch.sequences, axis=0), atol=1e-12)
    weights = pddm.softmax_weights(batch.returns, 10.0)
    assert math.isclose(float(np.sum(weights)), 1.0, rel_tol=1e-12)


def test_filtered_noise_shapes():
    config = pddm.PlannerConfig()
    config.horizon = 4
    config.num_candidates = 3
    config.beta = 0.6
    noise_a = pddm.sample_filtered_noise(config, 2, pddm.Rng(9))
    noise_b = pddm.sample_filtered_noise(config, 2, pddm.Rng(9))
    assert len(noise_a) == 3
    assert noise_a[0].shape == (4, 2)
    assert all(np.array_equal(x, y) for x, y in zip(noise_a, noise_b))


def test_planning_and_mpc_step():
    env = pddm.make_environment("reacher2")
    oracle = pddm.OracleModel(env)
    config = pddm.PlannerConfig()
    config.kind = pddm.PlannerKind.PDDM
    config.horizon = 5
    config.num_candidates = 20
    state = env.reset(3)
    result = pddm.plan(oracle, env, state, config, None, pddm.Rng(4))
    assert result.mean.shape == (5, 2)
    assert np.all(np.abs(result.action) <= 1.0)
    action, next_mean = pddm.mpc_step(state, oracle, env, config, None, pddm.Rng(4))
    assert np.array_equal(action, result.action)
    assert np.array_equal(next_mean, result.next_mean)

    for kind in (pddm.PlannerKind.RANDOM_SHOOTING, pddm.PlannerKind.CEM):
        config.kind = kind
        out = pddm.plan(oracle, env, state, config, None, pddm.Rng(4))
        assert np.all(np.abs(out.action) <= 1.0)


def test_run_experiment_and_evaluate():
    env = pddm.make_environment("pendulum")
    config = pddm.ExperimentConfig()
    config.iterations = 2
    config.rollouts_per_iter = 2
    config.steps_per_rollout = 5
    config.train_epochs = 1
    config.hidden = [8]
    config.ensemble_size = 2
    config.batch_size = 16
    config.seed = 6
    config.planner.kind = pddm.PlannerKind.PDDM
    config.planner.horizon = 2
    config.planner.num_candidates = 4
    result = pddm.run_experiment(env, config)
    assert len(result.episodes) == 4
    assert result.total_env_steps == 20
    assert len(result.dataset) == 20
    assert len(result.losses) == 2 * 1 * 2  # iterations x epochs x members
    assert all(len(ep) == 5 for ep in result.episodes)
    assert math.isclose(
        result.episodes[0].episode_return,
        sum(s.reward for s in result.episodes[0].steps),
        rel_tol=1e-12,
    )

    summary = pddm.evaluate_policy(env, result.ensemble, config.planner, 2, 123)
    assert summary.episodes == 2
    assert 0.0 <= summary.success_rate <= 1.0
    assert summary.ci_low <= summary.success_rate <= summary.ci_high


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok {test.__name__}")
    print(f"{len(tests)} python smoke tests passed")


if __name__ == "__main__":
    sys.exit(main())

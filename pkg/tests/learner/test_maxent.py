import logging
import math

import numpy as np
import pytest
from scipy.special import expit

from pycirl.common import IrlError, IrlException, Mdp, Metric, RewardWeights, Trajectory
from pycirl.learner import (
    ConstantSchedule,
    LearnerState,
    gradient,
    inverse_time,
    log_likelihood,
    mu_policy_exact,
    soft_value_iteration,
    train,
    train_step,
    trajectory_loss,
)
from pycirl.teacher import (
    CurriculumContext,
    CurriculumStrategy,
    build_curriculum,
    schedule_minibatches,
)


def absorbing_chain() -> Mdp:
    """1 action, state 0 leads to the zero-feature sink 1"""
    transition = np.zeros((2, 1, 2))
    transition[:, 0, 1] = 1.0
    return Mdp(transition, 0.9, [1.0, 0.0], [[[1.0, 0.0]], [[0.0, 0.0]]])


def single_step_instance(rng, random_mdp, n_demos=6):
    """gamma = 0 MDP with one-step demos and p0 set to the distribution of their starts"""
    mdp = random_mdp(rng, n_states=4, n_actions=3, feature_dim=5, gamma=0.0)
    states = rng.integers(4, size=n_demos)
    demos = [Trajectory([(s, rng.integers(3))]) for s in states]
    return mdp.with_initial_distribution(np.bincount(states, minlength=4) / n_demos), demos


def test_log_likelihood_uniform(uniform_chain):
    xi = Trajectory([(0, 0), (0, 1), (0, 0)])
    assert log_likelihood(uniform_chain, [xi], [0.0]) == pytest.approx(3 * math.log(0.5))


def test_log_likelihood_single_action(one_state_mdp):
    mdp = one_state_mdp([0.7], 0.9)
    assert log_likelihood(mdp, [Trajectory([(0, 0)] * 3)], [1.0]) == 0.0


def test_log_likelihood_product(rng, random_mdp, random_demos):
    mdp = random_mdp(rng, n_states=3, n_actions=2)
    w = rng.normal(size=mdp.feature_dim)
    demos = random_demos(rng, mdp, n_demos=2)
    pi = soft_value_iteration(mdp, w).pi

    expected = sum(math.log(np.prod([pi[s, a] for s, a in xi])) for xi in demos)
    assert log_likelihood(mdp, demos, w) == pytest.approx(expected, abs=1e-12)


def test_log_likelihood_not_converged(caplog, one_state_mdp):
    with caplog.at_level(logging.WARNING):
        log_likelihood(one_state_mdp([1.0, 0.0], 0.9), [Trajectory([(0, 0)])], [1.0], max_iter=1)
    assert "non-converged" in caplog.text


def test_trajectory_loss(uniform_chain):
    one = Trajectory([(0, 1)])
    two = Trajectory([(0, 0), (0, 1)])

    assert trajectory_loss(uniform_chain, one, [0.0]) == pytest.approx(math.log(2))
    assert trajectory_loss(uniform_chain, one, [0.0], discounted=True) == pytest.approx(
        math.log(2)
    )
    assert trajectory_loss(uniform_chain, two, [0.0], discounted=True) == pytest.approx(
        1.5 * math.log(2)
    )
    assert trajectory_loss(uniform_chain, two, [0.0]) == pytest.approx(2 * math.log(2))


def test_trajectory_loss_is_negative_log_likelihood(rng, random_mdp, random_demos):
    mdp = random_mdp(rng)
    w = rng.normal(size=mdp.feature_dim)
    xi = random_demos(rng, mdp, n_demos=1)[0]
    assert trajectory_loss(mdp, xi, w) == -log_likelihood(mdp, [xi], w)


def test_gradient_empty(rng, random_mdp):
    mdp = random_mdp(rng)
    with pytest.raises(IrlException) as excinfo:
        gradient(mdp, [], np.zeros(mdp.feature_dim))
    assert excinfo.value.error_code == IrlError.EMPTY_INPUT


def test_gradient_stationary():
    mdp = absorbing_chain()
    g = gradient(mdp, [Trajectory([(0, 0), (1, 0)])], [0.3, -0.2])
    np.testing.assert_allclose(g, [0.0, 0.0], atol=1e-9)


def test_gradient_finite_differences(random_mdp):
    """``mu_demos - mu_pi`` is the gradient of the normalized log-likelihood"""
    rng = np.random.default_rng(99)
    h = 1e-5
    for _ in range(20):
        mdp, demos = single_step_instance(rng, random_mdp)
        w = rng.uniform(-1, 1, size=mdp.feature_dim)

        numeric = np.zeros(mdp.feature_dim)
        for k in range(mdp.feature_dim):
            step = np.zeros(mdp.feature_dim)
            step[k] = h
            numeric[k] = (
                log_likelihood(mdp, demos, w + step) - log_likelihood(mdp, demos, w - step)
            ) / (2 * h * len(demos))

        np.testing.assert_allclose(gradient(mdp, demos, w), numeric, rtol=1e-4, atol=1e-8)


def test_log_likelihood_concave(random_mdp):
    rng = np.random.default_rng(7)
    for _ in range(5):
        mdp, demos = single_step_instance(rng, random_mdp)
        w = rng.uniform(-1, 1, size=mdp.feature_dim)
        direction = rng.normal(size=mdp.feature_dim)
        values = [log_likelihood(mdp, demos, w + t * direction) for t in np.linspace(-2, 2, 9)]
        assert np.all(np.diff(values, 2) <= 1e-9)


def test_learner_state_initial():
    state = LearnerState.initial(30, np.random.default_rng(4), vi_tol=1e-6)
    again = LearnerState.initial(30, np.random.default_rng(4))

    assert state.w == again.w
    assert np.all(np.abs(state.w.w) <= 1.0)
    assert state.t == 1
    assert state.vi_tol == 1e-6
    assert state.lr_schedule is inverse_time


def test_learner_state_initial_with_mc_generator():
    mc_rng = np.random.default_rng(1)
    state = LearnerState.initial(3, np.random.default_rng(0), -1.0, 1.0, rng=mc_rng)

    assert state.rng is mc_rng
    assert state.w == LearnerState.initial(3, np.random.default_rng(0)).w


def test_learner_state_policy_cache(rng, random_mdp, random_demos):
    mdp = random_mdp(rng)
    state = LearnerState.initial(mdp.feature_dim, rng)

    assert not state.cache_valid
    policy = state.policy(mdp)
    assert state.policy(mdp) is policy
    assert state.cache_valid

    next_state = train_step(state, mdp, random_demos(rng, mdp))
    assert next_state.policy_cache is None
    assert next_state.t == 2


def test_train_step_zero_gradient():
    mdp = absorbing_chain()
    state = LearnerState(RewardWeights([0.3, -0.2]))
    next_state = train_step(state, mdp, [Trajectory([(0, 0), (1, 0)])])
    np.testing.assert_allclose(next_state.w.w, [0.3, -0.2], atol=1e-9)


def test_train_step_unit_rate(rng, random_mdp, random_demos):
    mdp = random_mdp(rng)
    w = rng.uniform(-1, 1, size=mdp.feature_dim)
    minibatch = random_demos(rng, mdp)
    state = LearnerState(RewardWeights(w), lr_schedule=ConstantSchedule(1.0))

    next_state = train_step(state, mdp, minibatch)
    np.testing.assert_array_equal(next_state.w.w, w + gradient(mdp, minibatch, w))


def test_train_two_steps(two_action_mdp):
    """Hand-unrolled trace with eta_t = 1 / t"""
    xi = Trajectory([(0, 0)])
    state, record = train(LearnerState(RewardWeights([0.0, 0.0])), two_action_mdp, [[xi], [xi]])

    # step 1: uniform policy, gradient (0.5, -0.5), eta = 1
    # step 2: pi(0) = sigmoid(1), eta = 1/2
    shift = 0.5 * (1 - expit(1.0))
    np.testing.assert_allclose(state.w.w, [0.5 + shift, -0.5 - shift], rtol=0, atol=1e-12)
    assert state.t == 3
    assert len(record) == 2
    assert record.column("step") == [1, 2]
    np.testing.assert_array_equal(record.final_weights, state.w.w)


def test_train_empty_schedule(rng, random_mdp):
    mdp = random_mdp(rng)
    state = LearnerState.initial(mdp.feature_dim, rng)
    final, record = train(state, mdp, [], seed=3)

    assert final is state
    assert len(record) == 0
    assert record.seed == 3
    np.testing.assert_array_equal(record.final_weights, state.w.w)


def test_train_single_minibatch(rng, random_mdp, random_demos):
    mdp = random_mdp(rng)
    minibatch = random_demos(rng, mdp)
    state = LearnerState.initial(mdp.feature_dim, rng)

    expected = train_step(state, mdp, minibatch)
    final, _ = train(state, mdp, [minibatch])
    np.testing.assert_array_equal(final.w.w, expected.w.w)


def test_train_callbacks(rng, random_mdp, random_demos):
    mdp = random_mdp(rng)
    state = LearnerState.initial(mdp.feature_dim, rng)
    callbacks = {Metric.REWARD_GAP: lambda mdp, policy: float(policy.pi[0, 0])}
    _, record = train(state, mdp, [random_demos(rng, mdp)] * 3, callbacks)

    assert all(0 < value < 1 for value in record.column("reward_gap"))
    assert record.column("feature_mismatch") == [None] * 3
    assert record.column("selected_count") == [None] * 3
    assert record.n_non_converged == 0


def test_train_not_converged(rng, random_mdp, random_demos):
    mdp = random_mdp(rng)
    state = LearnerState.initial(mdp.feature_dim, rng, vi_max_iter=2)
    final, record = train(state, mdp, [random_demos(rng, mdp)] * 2)

    assert not final.last_converged
    assert record.n_non_converged == 2


@pytest.mark.slow
def test_random_order_reduces_error(small_grid):
    env, expert, pool = small_grid
    expert_mu = mu_policy_exact(env.mdp, expert.matrix()).mu
    context = CurriculumContext(env.mdp, env.w_star)

    def mismatch(state):
        return np.linalg.norm(mu_policy_exact(env.mdp, state.policy(env.mdp).pi).mu - expert_mu)

    improved = 0
    for seed in range(20):
        run_pool = pool.copy()
        curriculum = build_curriculum(run_pool, CurriculumStrategy.random(seed), context)
        state = LearnerState.initial(env.mdp.feature_dim, np.random.default_rng(seed))
        initial_error = mismatch(state)
        final, _ = train(state, env.mdp, schedule_minibatches(curriculum, run_pool))
        final_error = mismatch(final)
        assert np.isfinite(final_error)
        improved += final_error < initial_error
    assert improved >= 18

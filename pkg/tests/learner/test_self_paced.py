import math

import numpy as np
import pytest
from scipy.special import expit

from pycirl.common import DemoPool, IrlError, IrlException, Metric, RewardWeights, Trajectory
from pycirl.learner import (
    GrowthTrigger,
    LearnerState,
    LossForm,
    SpirlConfig,
    batch_train,
    select_demos,
    spirl_train,
    train_step,
    update_lambda,
)
from pycirl.learner.self_paced import demo_losses
from pycirl.learner.soft_vi import soft_value_iteration
from pycirl.teacher import (
    ExpertSpec,
    GridworldSpec,
    build_gridworld,
    expert_policy,
    generate_demos,
)


def weight_recorder(trace: list):
    """Metric callbacks storing the weights of the policy evaluated after every step"""

    def record(mdp, policy):
        trace.append(policy.weights_used.w)
        return 0.0

    return {Metric.FEATURE_MISMATCH: record}


@pytest.fixture
def random_pool(rng, random_mdp, random_demos):
    mdp = random_mdp(rng, n_states=4, n_actions=3)
    return mdp, DemoPool(random_demos(rng, mdp, n_demos=8, max_length=5))


def test_select_demos_hand_losses(uniform_chain):
    short, long = Trajectory([(0, 0)]), Trajectory([(0, 1), (0, 0), (0, 1)])
    pool = DemoPool([short, long])

    # losses ln 2 and 1.75 ln 2
    assert select_demos(uniform_chain, pool, RewardWeights([0.0]), 1.0) == [short]
    assert select_demos(uniform_chain, pool, RewardWeights([0.0]), 1.8 * math.log(2)) == [
        short,
        long,
    ]


def test_select_demos_bounds(random_pool):
    mdp, pool = random_pool
    w = RewardWeights(np.zeros(mdp.feature_dim))

    assert select_demos(mdp, pool, w, math.inf) == list(pool)
    assert select_demos(mdp, pool, w, -1.0) == []


def test_select_demos_monotone(rng, random_pool):
    mdp, pool = random_pool
    w = RewardWeights(rng.normal(size=mdp.feature_dim))
    thresholds = np.sort(rng.uniform(0, 10, size=6))
    selections = [set(select_demos(mdp, pool, w, value)) for value in thresholds]

    for smaller, larger in zip(selections, selections[1:]):
        assert smaller <= larger


def test_update_lambda():
    config = SpirlConfig(delta_lambda=0.5)

    assert update_lambda(config, 1.0, 5, 3) == 1.0
    assert update_lambda(config, 1.0, 4, 4) == 1.5
    assert update_lambda(config, 1.0, 2, 5) == 1.5

    shrinking = SpirlConfig(0.5, growth_trigger=GrowthTrigger.SHRINKING)
    assert update_lambda(shrinking, 1.0, 4, 4) == 1.0
    assert update_lambda(shrinking, 1.0, 2, 5) == 1.5

    with pytest.raises(IrlException) as excinfo:
        update_lambda(config, 1.0, -1, 0)
    assert excinfo.value.error_code == IrlError.INVALID_ARGUMENT


def test_spirl_config_invalid():
    with pytest.raises(IrlException) as excinfo:
        SpirlConfig(delta_lambda=-0.1)
    assert excinfo.value.error_code == IrlError.INVALID_ARGUMENT


def test_spirl_infinite_threshold_is_batch(random_pool):
    mdp, pool = random_pool
    spirl_trace, batch_trace = [], []

    spirl_state, spirl_record = spirl_train(
        mdp,
        pool,
        LearnerState.initial(mdp.feature_dim, np.random.default_rng(11)),
        SpirlConfig(0.1, lambda0=math.inf),
        steps=50,
        callbacks=weight_recorder(spirl_trace),
    )
    batch_state, batch_record = batch_train(
        mdp,
        pool,
        LearnerState.initial(mdp.feature_dim, np.random.default_rng(11)),
        steps=50,
        callbacks=weight_recorder(batch_trace),
    )

    assert len(spirl_trace) == len(batch_trace) == 50
    for spirl_w, batch_w in zip(spirl_trace, batch_trace):
        np.testing.assert_array_equal(spirl_w, batch_w)
    assert spirl_record.final_weights_digest == batch_record.final_weights_digest
    assert spirl_record.column("selected_count") == [len(pool)] * 50
    assert batch_record.column("selected_count") == [None] * 50
    assert spirl_state.t == batch_state.t == 51


def test_spirl_frozen(random_pool):
    mdp, pool = random_pool
    init = LearnerState.initial(mdp.feature_dim, np.random.default_rng(2))
    state, record = spirl_train(mdp, pool, init, SpirlConfig(0.0, lambda0=-1.0), steps=5)

    np.testing.assert_array_equal(state.w.w, init.w.w)
    assert record.column("selected_count") == [0] * 5
    assert record.column("lambda_") == [-1.0] * 5
    assert state.t == 6


def test_spirl_two_demos(two_action_mdp):
    """The easy demonstration is used alone first, then both, then the threshold grows"""
    easy, hard = Trajectory([(0, 0)]), Trajectory([(0, 0)] * 3)
    config = SpirlConfig(1.0, lambda0=1.0, loss_form=LossForm.UNDISCOUNTED)
    state, record = spirl_train(
        two_action_mdp,
        DemoPool([easy, hard]),
        LearnerState(RewardWeights([0.0, 0.0])),
        config,
        steps=3,
    )

    # step 1: losses (ln 2, 3 ln 2), only the easy demo, w = (0.5, -0.5)
    # step 2: losses below 1 for both, eta = 1/2
    # step 3: both again, the selection stopped growing so lambda grows
    w = np.array([0.5, -0.5])
    for eta in (1 / 2, 1 / 3):
        shift = 1 - expit(w[0] - w[1])
        w = w + eta * np.array([shift, -shift])

    assert record.column("selected_count") == [1, 2, 2]
    assert record.column("lambda_") == [1.0, 1.0, 2.0]
    np.testing.assert_allclose(state.w.w, w, rtol=0, atol=1e-12)


def test_spirl_automatic_threshold(two_action_mdp):
    easy, hard = Trajectory([(0, 0)]), Trajectory([(0, 0)] * 3)
    config = SpirlConfig(1.0, loss_form=LossForm.UNDISCOUNTED)
    _, record = spirl_train(
        two_action_mdp,
        DemoPool([easy, hard]),
        LearnerState(RewardWeights([0.0, 0.0])),
        config,
        steps=1,
    )
    assert record.column("selected_count") == [1]


def test_spirl_threshold_non_decreasing(random_pool):
    mdp, pool = random_pool
    init = LearnerState.initial(mdp.feature_dim, np.random.default_rng(5))
    _, record = spirl_train(mdp, pool, init, SpirlConfig(0.2), steps=20)

    assert len(record) == 20
    assert np.all(np.diff(record.column("lambda_")) >= 0)
    assert record.column("selected_count")[0] >= 1


def test_spirl_default_steps(random_pool):
    mdp, pool = random_pool
    init = LearnerState.initial(mdp.feature_dim, np.random.default_rng(5))
    _, record = spirl_train(mdp, pool, init, SpirlConfig(0.2))
    assert len(record) == len(pool)


def test_invalid_runs(random_pool):
    mdp, pool = random_pool
    init = LearnerState.initial(mdp.feature_dim, np.random.default_rng(5))

    with pytest.raises(IrlException) as excinfo:
        spirl_train(mdp, pool, init, SpirlConfig(0.1), steps=0)
    assert excinfo.value.error_code == IrlError.INVALID_ARGUMENT

    with pytest.raises(IrlException) as excinfo:
        spirl_train(mdp, DemoPool([]), init, SpirlConfig(0.1))
    assert excinfo.value.error_code == IrlError.EMPTY_INPUT

    with pytest.raises(IrlException) as excinfo:
        batch_train(mdp, DemoPool([]), init, steps=3)
    assert excinfo.value.error_code == IrlError.EMPTY_INPUT


def test_batch_single_step(random_pool):
    mdp, pool = random_pool
    expected = train_step(
        LearnerState.initial(mdp.feature_dim, np.random.default_rng(8)), mdp, list(pool)
    )
    state, record = batch_train(
        mdp, pool, LearnerState.initial(mdp.feature_dim, np.random.default_rng(8)), steps=1
    )

    np.testing.assert_array_equal(state.w.w, expected.w.w)
    assert len(record) == 1
    assert pool.n_consumed == 0


def test_terminal_goal_losses_spread():
    """Demonstrations ending at a terminal goal get losses growing with their length"""
    env = build_gridworld(GridworldSpec.preset("single_goal", 5, 5, terminal_goals=True))
    starts = sorted(env.non_absorbing)
    expert = expert_policy(env.mdp, env.w_star)
    spec = ExpertSpec(env.w_star, tuple(starts), env.default_horizon)
    pool = generate_demos(env.mdp, expert, spec, np.random.default_rng(0), env.absorbing)
    w = RewardWeights(np.zeros(env.mdp.feature_dim))
    losses = demo_losses(env.mdp, pool, soft_value_iteration(env.mdp, w))

    gamma = env.mdp.gamma
    for xi, loss in zip(pool, losses):
        assert loss == pytest.approx(math.log(5) * (1 - gamma**xi.horizon) / (1 - gamma))
    # the smallest loss, the automatic initial threshold, only keeps the goal start
    assert min(losses) == pytest.approx((1 + gamma) * math.log(5))
    assert len(select_demos(env.mdp, pool, w, min(losses))) == 1
    assert len(set(np.round(losses, 9))) > 4

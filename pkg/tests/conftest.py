"""
A module containing testing fixtures.
"""

from pathlib import Path

import numpy as np
import pytest

from pycirl.common import Mdp, Trajectory
from pycirl.teacher import (
    ExpertSpec,
    GridworldSpec,
    build_gridworld,
    build_hanoi,
    choose_demo_starts,
    expert_policy,
    generate_demos,
)

CONFIG_DIRECTORY = Path(__file__).parents[1] / "docs" / "source" / "examples" / "configs"


def _random_mdp(
    rng: np.random.Generator,
    n_states: int = 4,
    n_actions: int = 3,
    feature_dim: "int | None" = None,
    gamma: float = 0.9,
    deterministic: bool = False,
) -> Mdp:
    feature_dim = n_states if feature_dim is None else feature_dim
    if deterministic:
        targets = rng.integers(n_states, size=(n_states, n_actions))
        transition = np.eye(n_states)[targets]
    else:
        transition = rng.dirichlet(np.ones(n_states), size=(n_states, n_actions))
    features = rng.uniform(0.0, 1.0, size=(n_states, n_actions, feature_dim))
    return Mdp(transition, gamma, np.full(n_states, 1.0 / n_states), features)


def _random_demos(
    rng: np.random.Generator, mdp: Mdp, n_demos: int = 3, max_length: int = 4
) -> list[Trajectory]:
    demos = []
    for _ in range(n_demos):
        length = int(rng.integers(1, max_length + 1))
        states = rng.integers(mdp.n_states, size=length)
        actions = rng.integers(mdp.n_actions, size=length)
        demos.append(Trajectory(zip(states, actions)))
    return demos


def _one_state_mdp(rewards, gamma: float) -> Mdp:
    rewards = np.asarray(rewards, dtype=float)
    features = rewards[np.newaxis, :, np.newaxis]
    return Mdp(np.ones((1, rewards.shape[0], 1)), gamma, [1.0], features)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def random_mdp():
    """Factory of MDPs with Dirichlet transitions, uniform ``p0`` and features in [0, 1]"""
    return _random_mdp


@pytest.fixture
def random_demos():
    """Factory of short random trajectories of an MDP"""
    return _random_demos


@pytest.fixture
def one_state_mdp():
    """Factory of 1-state MDPs whose actions self-loop, with a scalar reward feature per
    action"""
    return _one_state_mdp


@pytest.fixture
def two_action_mdp():
    """1 state, 2 self-looping actions with one-hot 2-d features, gamma = 0"""
    return Mdp(np.ones((1, 2, 1)), 0.0, [1.0], [[[1.0, 0.0], [0.0, 1.0]]])


@pytest.fixture
def uniform_chain():
    """1 state, 2 actions with zero features: the soft policy is uniform for every w"""
    return Mdp(np.ones((1, 2, 1)), 0.5, [1.0], np.zeros((1, 2, 1)))


@pytest.fixture(scope="session")
def small_grid():
    """5x5 two_goals gridworld with 25 noise-free demonstrations"""
    rng = np.random.default_rng(0)
    env = build_gridworld(GridworldSpec.preset("two_goals", 5, 5))
    starts = choose_demo_starts(env, 25, rng)
    env = env.with_initial_states(starts)
    expert = expert_policy(env.mdp, env.w_star)
    spec = ExpertSpec(env.w_star, starts, env.default_horizon)
    pool = generate_demos(env.mdp, expert, spec, rng, env.absorbing)
    return env, expert, pool


@pytest.fixture(scope="session")
def hanoi():
    """Towers of Hanoi with one noise-free demonstration per state"""
    env = build_hanoi()
    starts = list(range(env.mdp.n_states))
    env = env.with_initial_states(starts)
    expert = expert_policy(env.mdp, env.w_star)
    spec = ExpertSpec(env.w_star, starts, env.default_horizon)
    pool = generate_demos(env.mdp, expert, spec, np.random.default_rng(0), env.absorbing)
    return env, expert, pool


@pytest.fixture
def config_directory():
    """Directory of the example experiment configurations"""
    return CONFIG_DIRECTORY

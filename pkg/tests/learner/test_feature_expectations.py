import numpy as np
import pytest

from pycirl.common import IrlError, IrlException, Mdp, MuMethod, Trajectory
from pycirl.learner import (
    MuEstimator,
    default_mc_horizon,
    mu_demo_set,
    mu_policy_exact,
    mu_policy_mc,
    mu_trajectory,
    state_occupancy,
)


def chain_mdp(gamma: float = 0.9) -> Mdp:
    """Deterministic chain 0 -> 1 -> 2, state 2 absorbing with zero features"""
    transition = np.zeros((3, 1, 3))
    transition[0, 0, 1] = transition[1, 0, 2] = transition[2, 0, 2] = 1.0
    features = np.zeros((3, 1, 3))
    features[0, 0, 0] = features[1, 0, 1] = 1.0
    return Mdp(transition, gamma, [1.0, 0.0, 0.0], features)


def test_mu_trajectory_single_step(rng, random_mdp):
    mdp = random_mdp(rng)
    np.testing.assert_array_equal(mu_trajectory(mdp, Trajectory([(2, 1)])).mu, mdp.feature(2, 1))


def test_mu_trajectory_geometric(rng, random_mdp):
    mdp = random_mdp(rng, gamma=0.5)
    mu = mu_trajectory(mdp, Trajectory([(1, 0), (1, 0)]))

    np.testing.assert_allclose(mu.mu, 1.5 * mdp.feature(1, 0))
    assert mu.method == MuMethod.EMPIRICAL


def test_mu_trajectory_one_hot():
    features = np.eye(3)[:, np.newaxis, :]
    mdp = Mdp(np.ones((3, 1, 3)) / 3, 0.9, np.ones(3) / 3, features)
    mu = mu_trajectory(mdp, Trajectory([(0, 0), (1, 0), (2, 0)]))

    np.testing.assert_allclose(mu.mu, [1.0, 0.9, 0.81])


def test_mu_trajectory_out_of_range(rng, random_mdp):
    with pytest.raises(IrlException) as excinfo:
        mu_trajectory(random_mdp(rng, n_states=2), Trajectory([(0, 0), (5, 0)]))
    assert excinfo.value.error_code == IrlError.INDEX_OUT_OF_RANGE


def test_mu_demo_set(rng, random_mdp, random_demos):
    mdp = random_mdp(rng, gamma=0.8)
    demos = random_demos(rng, mdp, n_demos=5)

    expected = np.zeros(mdp.feature_dim)
    for xi in demos:
        for t, (s, a) in enumerate(xi):
            expected += 0.8**t * mdp.features[s, a] / len(demos)
    np.testing.assert_allclose(mu_demo_set(mdp, demos).mu, expected, rtol=0, atol=1e-12)

    np.testing.assert_array_equal(mu_demo_set(mdp, demos[:1]).mu, mu_trajectory(mdp, demos[0]).mu)
    pair = (mu_trajectory(mdp, demos[0]).mu + mu_trajectory(mdp, demos[1]).mu) / 2
    np.testing.assert_allclose(mu_demo_set(mdp, demos[:2]).mu, pair)


def test_mu_demo_set_empty(rng, random_mdp):
    with pytest.raises(IrlException) as excinfo:
        mu_demo_set(random_mdp(rng), [])
    assert excinfo.value.error_code == IrlError.EMPTY_INPUT


def test_mu_policy_exact_geometric():
    mdp = Mdp(np.ones((1, 1, 1)), 0.5, [1.0], [[[1.0]]])
    mu = mu_policy_exact(mdp, [[1.0]])

    assert mu.mu[0] == pytest.approx(2.0, abs=1e-9)
    assert mu.method == MuMethod.EXACT


def test_mu_policy_exact_chain():
    mu = mu_policy_exact(chain_mdp(0.9), np.ones((3, 1)))
    np.testing.assert_allclose(mu.mu, [1.0, 0.9, 0.0], atol=1e-12)


def test_mu_policy_exact_linear_solve(rng, random_mdp):
    """The truncated series agrees with ``rho = p0 (I - gamma P_pi)^-1``"""
    mdp = random_mdp(rng, n_states=5, n_actions=3)
    pi = rng.dirichlet(np.ones(3), size=5)
    state_transition = np.einsum("sa,sat->st", pi, mdp.transition)
    rho = np.linalg.solve((np.eye(5) - mdp.gamma * state_transition).T, mdp.p0)
    expected = np.einsum("s,sa,sak->k", rho, pi, mdp.features)

    occupancy = state_occupancy(mdp, pi)
    assert occupancy.sum() == pytest.approx(1 / (1 - mdp.gamma), abs=1e-9)
    np.testing.assert_allclose(occupancy, rho, atol=1e-9)
    np.testing.assert_allclose(mu_policy_exact(mdp, pi).mu, expected, atol=1e-9)


def test_mu_policy_invalid(rng, random_mdp):
    mdp = random_mdp(rng, n_states=2, n_actions=2)

    with pytest.raises(IrlException) as excinfo:
        mu_policy_exact(mdp, [[0.5, 0.4], [0.5, 0.5]])
    assert excinfo.value.error_code == IrlError.NOT_STOCHASTIC

    with pytest.raises(IrlException) as excinfo:
        mu_policy_exact(mdp, [[1.5, -0.5], [0.5, 0.5]])
    assert excinfo.value.error_code == IrlError.NOT_STOCHASTIC

    with pytest.raises(IrlException) as excinfo:
        mu_policy_mc(mdp, np.ones((3, 2)) / 2)
    assert excinfo.value.error_code == IrlError.DIMENSION_MISMATCH

    with pytest.raises(IrlException) as excinfo:
        mu_policy_mc(mdp, np.ones((2, 2)) / 2, n_rollouts=0)
    assert excinfo.value.error_code == IrlError.INVALID_ARGUMENT


def test_default_mc_horizon():
    assert default_mc_horizon(0.9) == 241
    assert default_mc_horizon(0.0) == 1
    assert 0.9 ** default_mc_horizon(0.9) / 0.1 < 1e-10


def test_mu_policy_mc_deterministic(rng, random_mdp):
    """Without randomness the estimate only misses the tail after the horizon"""
    mdp = random_mdp(rng, n_states=4, n_actions=2, deterministic=True)
    mdp = mdp.with_initial_distribution([0.0, 1.0, 0.0, 0.0])
    pi = np.eye(2)[rng.integers(2, size=4)]
    horizon = 30

    mc = mu_policy_mc(mdp, pi, n_rollouts=5, horizon=horizon, rng=rng)
    exact = mu_policy_exact(mdp, pi)
    bound = mdp.gamma**horizon * mdp.max_feature / (1 - mdp.gamma)

    assert np.all(np.abs(mc.mu - exact.mu) <= bound + 1e-9)
    np.testing.assert_allclose(mc.stderr, np.zeros(mdp.feature_dim), atol=1e-12)
    assert mc.method == MuMethod.MONTE_CARLO
    assert (mc.n_rollouts, mc.horizon) == (5, horizon)


def test_mu_policy_mc_reproducible(rng, random_mdp):
    mdp = random_mdp(rng)
    pi = rng.dirichlet(np.ones(mdp.n_actions), size=mdp.n_states)

    first = mu_policy_mc(mdp, pi, n_rollouts=1, rng=np.random.default_rng(7))
    second = mu_policy_mc(mdp, pi, n_rollouts=1, rng=7)
    np.testing.assert_array_equal(first.mu, second.mu)


def test_mu_policy_mc_against_exact(random_mdp):
    """Each coordinate lies within 3 standard errors of the exact value, up to 2 misses"""
    rng = np.random.default_rng(2024)
    misses = 0
    for _ in range(10):
        mdp = random_mdp(rng, n_states=3, n_actions=2, feature_dim=3)
        pi = rng.dirichlet(np.ones(2), size=3)
        mc = mu_policy_mc(mdp, pi, n_rollouts=10_000, rng=rng)
        exact = mu_policy_exact(mdp, pi)
        misses += int(np.sum(np.abs(mc.mu - exact.mu) > 3 * mc.stderr))
    assert misses <= 2


def test_mu_estimator(rng, random_mdp):
    mdp = random_mdp(rng)
    pi = np.ones((mdp.n_states, mdp.n_actions)) / mdp.n_actions

    exact = MuEstimator().estimate(mdp, pi)
    np.testing.assert_array_equal(exact.mu, mu_policy_exact(mdp, pi).mu)

    mc = MuEstimator(MuMethod.MONTE_CARLO, n_rollouts=20, horizon=15).estimate(mdp, pi, rng)
    assert (mc.n_rollouts, mc.horizon) == (20, 15)

    with pytest.raises(IrlException) as excinfo:
        MuEstimator(MuMethod.EMPIRICAL).estimate(mdp, pi)
    assert excinfo.value.error_code == IrlError.INVALID_ARGUMENT

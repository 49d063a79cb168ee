"""Feature expectation vectors of trajectories and policies"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..common import IrlError, IrlException, Mdp, MuMethod, Trajectory
from ..common.mdp import STOCHASTIC_TOL
from ..helper import convert_to_array, convert_to_generator, truncation_horizon

__all__ = []

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_N_ROLLOUTS = 50


class FeatureExpectation:
    """Feature expectation vector ``mu`` and how it has been obtained"""

    def __init__(
        self,
        mu: np.ndarray,
        method: MuMethod,
        n_rollouts: "int | None" = None,
        horizon: "int | None" = None,
        stderr: "np.ndarray | None" = None,
    ) -> None:
        self._mu = convert_to_array(mu)
        self._method = method
        self._n_rollouts = n_rollouts
        self._horizon = horizon
        self._stderr = None if stderr is None else convert_to_array(stderr)

    @property
    def mu(self) -> np.ndarray:
        return self._mu

    @property
    def method(self) -> MuMethod:
        return self._method

    @property
    def n_rollouts(self) -> "int | None":
        """Number of sampled rollouts, Monte-Carlo only"""
        return self._n_rollouts

    @property
    def horizon(self) -> "int | None":
        """Length of the sampled rollouts, Monte-Carlo only"""
        return self._horizon

    @property
    def stderr(self) -> "np.ndarray | None":
        """Per-coordinate standard error of the mean, Monte-Carlo only"""
        return self._stderr

    def __len__(self) -> int:
        return self._mu.shape[0]

    def __repr__(self) -> str:
        return f"FeatureExpectation({self._mu.tolist()}, method={self._method.value})"


def default_mc_horizon(gamma: float, tol: float = DEFAULT_TOL) -> int:
    """Rollout length ``ceil(log(tol * (1 - gamma)) / log(gamma))``"""
    return truncation_horizon(gamma, tol)


def mu_trajectory(mdp: Mdp, xi: Trajectory) -> FeatureExpectation:
    """Empirical feature expectation ``sum_t gamma^t phi(s_t, a_t)`` of one trajectory

    The trajectory is used at its recorded length, without any tail correction.
    """
    xi.check(mdp)
    discounts = mdp.gamma ** np.arange(xi.horizon, dtype=float)
    mu = discounts @ mdp.features[xi.states, xi.actions]
    return FeatureExpectation(mu, MuMethod.EMPIRICAL)


def mu_demo_set(mdp: Mdp, demos: Sequence[Trajectory]) -> FeatureExpectation:
    """Mean of ``mu_trajectory`` over a non-empty set of demonstrations

    Raises
    ------
    IrlException
        If ``demos`` is empty
    """
    if len(demos) == 0:
        raise IrlException("the demonstration set is empty", IrlError.EMPTY_INPUT)
    mu = np.mean([mu_trajectory(mdp, xi).mu for xi in demos], axis=0)
    return FeatureExpectation(mu, MuMethod.EMPIRICAL)


def state_occupancy(mdp: Mdp, pi: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Discounted state occupancy ``rho = sum_k gamma^k P0 P_pi^k``

    Terms are accumulated until the remaining geometric mass, scaled by the largest feature
    magnitude, is below ``tol``.

    Parameters
    ----------
    mdp : Mdp
        Environment
    pi : np.ndarray
        Row-stochastic policy matrix ``[s, a]``
    tol : float, optional
        Truncation tolerance, by default 1e-10

    Returns
    -------
    np.ndarray
        Occupancy vector of length ``n_states``
    """
    pi = check_policy(mdp, pi)
    if not 0.0 <= mdp.gamma < 1.0:
        raise IrlException(f"gamma must be in [0, 1), got {mdp.gamma}", IrlError.INVALID_ARGUMENT)
    state_transition = np.einsum("sa,sat->st", pi, mdp.transition)
    scale = max(mdp.max_feature, 1.0) / (1.0 - mdp.gamma)

    increment = mdp.p0.copy()
    occupancy = np.zeros(mdp.n_states)
    while True:
        occupancy += increment
        increment = mdp.gamma * (increment @ state_transition)
        if np.sum(np.abs(increment)) * scale < tol:
            break
    return occupancy


def mu_policy_exact(mdp: Mdp, pi: np.ndarray, tol: float = DEFAULT_TOL) -> FeatureExpectation:
    """Feature expectation ``E[sum_t gamma^t phi(s_t, a_t) | s_0 ~ P0, pi]``

    Raises
    ------
    IrlException
        If ``pi`` is not row-stochastic
    """
    occupancy = state_occupancy(mdp, pi, tol)
    mu = np.einsum("s,sa,sak->k", occupancy, np.asarray(pi, dtype=float), mdp.features)
    return FeatureExpectation(mu, MuMethod.EXACT)


def mu_policy_mc(
    mdp: Mdp,
    pi: np.ndarray,
    n_rollouts: int = DEFAULT_N_ROLLOUTS,
    horizon: "int | None" = None,
    rng: "np.random.Generator | int | None" = None,
) -> FeatureExpectation:
    """Monte-Carlo estimate of the feature expectation of ``pi``

    Samples ``n_rollouts`` trajectories of ``horizon`` steps (``s_0 ~ P0``, ``a ~ pi``,
    ``s' ~ T``) and returns the mean of their discounted feature sums. The result only depends
    on the state of ``rng``.

    Parameters
    ----------
    mdp : Mdp
        Environment
    pi : np.ndarray
        Row-stochastic policy matrix
    n_rollouts : int, optional
        Number of trajectories, by default 50
    horizon : int | None, optional
        Trajectory length, by default ``default_mc_horizon(mdp.gamma)``
    rng : np.random.Generator | int | None, optional
        Generator or seed

    Returns
    -------
    FeatureExpectation
        Estimate with its per-coordinate standard error
    """
    pi = check_policy(mdp, pi)
    if n_rollouts < 1:
        raise IrlException(f"n_rollouts must be >= 1, got {n_rollouts}", IrlError.INVALID_ARGUMENT)
    if horizon is None:
        horizon = default_mc_horizon(mdp.gamma)
    if horizon < 1:
        raise IrlException(f"horizon must be >= 1, got {horizon}", IrlError.INVALID_ARGUMENT)
    rng = convert_to_generator(rng)

    states = sample_rows(np.broadcast_to(mdp.p0, (n_rollouts, mdp.n_states)), rng)
    samples = np.zeros((n_rollouts, mdp.feature_dim))
    discount = 1.0
    for t in range(horizon):
        actions = sample_rows(pi[states], rng)
        samples += discount * mdp.features[states, actions]
        if t + 1 < horizon:
            states = sample_rows(mdp.transition[states, actions], rng)
        discount *= mdp.gamma

    stderr = (
        samples.std(axis=0, ddof=1) / np.sqrt(n_rollouts)
        if n_rollouts > 1
        else np.zeros(mdp.feature_dim)
    )
    return FeatureExpectation(
        samples.mean(axis=0), MuMethod.MONTE_CARLO, n_rollouts, horizon, stderr
    )


@dataclass(frozen=True)
class MuEstimator:
    """How the learner computes the feature expectation of its own policy"""

    method: MuMethod = MuMethod.EXACT
    n_rollouts: int = DEFAULT_N_ROLLOUTS
    horizon: "int | None" = None
    tol: float = DEFAULT_TOL

    def estimate(
        self, mdp: Mdp, pi: np.ndarray, rng: "np.random.Generator | None" = None
    ) -> FeatureExpectation:
        if self.method == MuMethod.MONTE_CARLO:
            horizon = self.horizon
            if horizon is None:
                horizon = default_mc_horizon(mdp.gamma, self.tol)
            return mu_policy_mc(mdp, pi, self.n_rollouts, horizon, rng)
        if self.method == MuMethod.EXACT:
            return mu_policy_exact(mdp, pi, self.tol)
        raise IrlException(f"{self.method} can not estimate a policy", IrlError.INVALID_ARGUMENT)


def check_policy(mdp: Mdp, pi: np.ndarray) -> np.ndarray:
    """Return ``pi`` as an array, raise an ``IrlException`` if it is not row-stochastic"""
    pi = np.asarray(pi, dtype=float)
    if pi.shape != (mdp.n_states, mdp.n_actions):
        raise IrlException(
            f"policy must have shape ({mdp.n_states}, {mdp.n_actions}), got {pi.shape}",
            IrlError.DIMENSION_MISMATCH,
        )
    if np.any(pi < 0) or np.any(np.abs(pi.sum(axis=1) - 1.0) > STOCHASTIC_TOL):
        raise IrlException("policy rows must be distributions", IrlError.NOT_STOCHASTIC)
    return pi


def sample_rows(probabilities: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Draw one index per row of a matrix of distributions"""
    cdf = np.cumsum(probabilities, axis=1)
    u = rng.random((cdf.shape[0], 1)) * cdf[:, -1:]
    return np.minimum(np.sum(cdf <= u, axis=1), cdf.shape[1] - 1)

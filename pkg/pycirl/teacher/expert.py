"""Optimal expert policy and generation of (possibly noisy) demonstrations"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..common import DemoPool, IrlError, IrlException, Mdp, RewardWeights, Trajectory
from ..helper import convert_to_array

__all__ = []

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100_000
TIE_ATOL = 1e-9


@dataclass(frozen=True)
class ExpertSpec:
    """How the teacher produces its demonstrations

    Parameters
    ----------
    w_star : RewardWeights
        Expert weights
    demo_starts : tuple[int, ...]
        One demonstration per start state, in this order
    horizon : int
        Maximum number of steps of a demonstration
    noise_prob : float, optional
        Probability of a uniformly random action at every step
    """

    w_star: RewardWeights
    demo_starts: tuple[int, ...]
    horizon: int
    noise_prob: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "demo_starts", tuple(int(s) for s in self.demo_starts))
        if not self.demo_starts:
            raise IrlException("demo_starts is empty", IrlError.EMPTY_INPUT)
        if self.horizon < 1:
            raise IrlException(
                f"horizon must be >= 1, got {self.horizon}", IrlError.INVALID_ARGUMENT
            )
        if not 0.0 <= self.noise_prob <= 1.0:
            raise IrlException(
                f"noise_prob must be in [0, 1], got {self.noise_prob}", IrlError.INVALID_ARGUMENT
            )


class ExpertPolicy:
    """Deterministic greedy policy with its optimal values"""

    def __init__(self, actions, values, q) -> None:
        self._actions = convert_to_array(actions, dtype=np.int64)
        self._values = convert_to_array(values)
        self._q = convert_to_array(q)

    @property
    def actions(self) -> np.ndarray:
        """Chosen action of every state"""
        return self._actions

    @property
    def values(self) -> np.ndarray:
        """Optimal state values ``V*``"""
        return self._values

    @property
    def q(self) -> np.ndarray:
        return self._q

    def matrix(self, n_actions: "int | None" = None) -> np.ndarray:
        """One-hot policy matrix ``[s, a]``"""
        n_actions = self._q.shape[1] if n_actions is None else n_actions
        pi = np.zeros((self._actions.shape[0], n_actions))
        pi[np.arange(self._actions.shape[0]), self._actions] = 1.0
        return pi

    def __len__(self) -> int:
        return self._actions.shape[0]


def expert_policy(
    mdp: Mdp,
    w_star: "RewardWeights | np.ndarray",
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> ExpertPolicy:
    """Optimal policy of ``R_w*`` by hard-max value iteration

    Actions whose value is within ``1e-9`` of the best one are ties, the lowest index wins.

    Parameters
    ----------
    mdp : Mdp
        Environment
    w_star : RewardWeights | np.ndarray
        Expert weights
    tol : float, optional
        Sup-norm stopping tolerance, by default 1e-10
    max_iter : int, optional
        Iteration cap, by default 100000

    Returns
    -------
    ExpertPolicy
        Greedy policy, optimal values and action values
    """
    rewards = mdp.reward_matrix(w_star)
    v = np.zeros(mdp.n_states)
    for iteration in range(1, max_iter + 1):
        v_next = np.max(rewards + mdp.gamma * mdp.transition @ v, axis=1)
        residual = float(np.max(np.abs(v_next - v)))
        v = v_next
        if residual < tol:
            logger.debug("value iteration converged after %d iterations", iteration)
            break
    else:
        logger.warning("value iteration stopped after %d iterations", max_iter)

    q = rewards + mdp.gamma * mdp.transition @ v
    best = q.max(axis=1, keepdims=True)
    actions = np.argmax(np.isclose(q, best, rtol=0.0, atol=TIE_ATOL), axis=1)
    return ExpertPolicy(actions, q.max(axis=1), q)


def policy_evaluation(
    mdp: Mdp,
    pi: np.ndarray,
    w: "RewardWeights | np.ndarray",
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> np.ndarray:
    """State values ``V_pi`` of ``R_w`` by iterating the Bellman expectation operator"""
    pi = np.asarray(pi, dtype=float)
    if pi.shape != (mdp.n_states, mdp.n_actions):
        raise IrlException(
            f"policy must have shape ({mdp.n_states}, {mdp.n_actions}), got {pi.shape}",
            IrlError.DIMENSION_MISMATCH,
        )
    rewards = np.sum(pi * mdp.reward_matrix(w), axis=1)
    state_transition = np.einsum("sa,sat->st", pi, mdp.transition)
    v = np.zeros(mdp.n_states)
    for _ in range(max_iter):
        v_next = rewards + mdp.gamma * state_transition @ v
        if np.max(np.abs(v_next - v)) < tol:
            return v_next
        v = v_next
    logger.warning("policy evaluation stopped after %d iterations", max_iter)
    return v


def rollout(
    mdp: Mdp,
    policy: ExpertPolicy,
    start: int,
    horizon: int,
    noise_prob: float,
    rng: np.random.Generator,
    absorbing: "frozenset[int] | Sequence[int]" = frozenset(),
) -> Trajectory:
    """One demonstration from ``start``, it ends after its first step in an absorbing state"""
    steps = []
    s = start
    for _ in range(horizon):
        a = int(policy.actions[s])
        if noise_prob > 0 and rng.random() < noise_prob:
            a = int(rng.integers(mdp.n_actions))
        steps.append((s, a))
        if s in absorbing:
            break
        s = int(rng.choice(mdp.n_states, p=mdp.transition[s, a]))
    return Trajectory(steps)


def generate_demos(
    mdp: Mdp,
    policy: ExpertPolicy,
    spec: ExpertSpec,
    rng: np.random.Generator,
    absorbing: "frozenset[int] | Sequence[int]" = frozenset(),
) -> DemoPool:
    """One demonstration per start state of ``spec``, in the same order

    Raises
    ------
    IrlException
        If a start state is out of range
    """
    if len(policy) != mdp.n_states:
        raise IrlException(
            f"policy covers {len(policy)} states, the MDP has {mdp.n_states}",
            IrlError.DIMENSION_MISMATCH,
        )
    for start in spec.demo_starts:
        if not 0 <= start < mdp.n_states:
            raise IrlException(
                f"start state {start} out of range [0, {mdp.n_states})",
                IrlError.INVALID_ARGUMENT,
            )
    absorbing = frozenset(absorbing)
    demos = [
        rollout(mdp, policy, start, spec.horizon, spec.noise_prob, rng, absorbing)
        for start in spec.demo_starts
    ]
    logger.debug(
        "generated %d demonstrations, noise %.3g, mean length %.1f",
        len(demos),
        spec.noise_prob,
        np.mean([demo.horizon for demo in demos]),
    )
    return DemoPool(demos)

"""Online MaxEnt IRL learner: likelihood, trajectory loss, gradient and gradient ascent"""

import logging
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field, replace

import numpy as np

from ..common import IrlError, IrlException, Mdp, Metric, RewardWeights, Trajectory
from .feature_expectations import MuEstimator, mu_demo_set
from .record import RunRecord, StepRecord
from .soft_vi import DEFAULT_MAX_ITER, DEFAULT_TOL, SoftPolicy, soft_value_iteration

__all__ = []

logger = logging.getLogger(__name__)

LearningRateSchedule = Callable[[int], float]
MetricCallback = Callable[[Mdp, SoftPolicy], float]


def inverse_time(t: int) -> float:
    """Learning rate ``eta_t = 1 / t``, ``t`` starts at 1"""
    return 1.0 / t


class ConstantSchedule:
    """Learning rate which does not depend on the step"""

    def __init__(self, eta: float) -> None:
        self._eta = float(eta)

    def __call__(self, t: int) -> float:
        return self._eta

    def __repr__(self) -> str:
        return f"ConstantSchedule({self._eta})"


@dataclass
class LearnerState:
    """State of an online MaxEnt IRL learner

    ``policy_cache`` holds the soft policy of ``w`` once it has been computed, it is only used
    while its ``weights_used`` equal ``w``.
    """

    w: RewardWeights
    t: int = 1
    policy_cache: "SoftPolicy | None" = None
    lr_schedule: LearningRateSchedule = inverse_time
    mu_mode: MuEstimator = field(default_factory=MuEstimator)
    vi_tol: float = DEFAULT_TOL
    vi_max_iter: int = DEFAULT_MAX_ITER
    rng: np.random.Generator = field(default_factory=lambda: np.random.default_rng(0))
    """Generator used by Monte-Carlo feature expectations"""
    last_converged: bool = True
    """Whether the policy used by the last update converged"""

    @staticmethod
    def initial(
        dim: int,
        init_rng: np.random.Generator,
        low: float = -1.0,
        high: float = 1.0,
        **kwargs,
    ) -> "LearnerState":
        """Learner with ``w_0`` drawn uniformly in ``[low, high]^dim``

        Extra keyword arguments are forwarded to the ``LearnerState`` constructor.
        """
        return LearnerState(w=RewardWeights.uniform(dim, init_rng, low, high), **kwargs)

    @property
    def cache_valid(self) -> bool:
        return self.policy_cache is not None and self.policy_cache.weights_used == self.w

    def policy(self, mdp: Mdp) -> SoftPolicy:
        """Soft policy of the current weights, computed once and cached"""
        if not self.cache_valid:
            self.policy_cache = soft_value_iteration(mdp, self.w, self.vi_tol, self.vi_max_iter)
        return self.policy_cache  # type: ignore[return-value]


def policy_log_prob(mdp: Mdp, policy: SoftPolicy, xi: Trajectory, discounted: bool) -> float:
    """``sum_t log pi(a_t|s_t)``, each term weighted by ``gamma^t`` when ``discounted``"""
    xi.check(mdp)
    log_probs = policy.log_pi[xi.states, xi.actions]
    if discounted:
        return float(mdp.gamma ** np.arange(xi.horizon, dtype=float) @ log_probs)
    return float(np.sum(log_probs))


def log_likelihood(
    mdp: Mdp,
    demos: Sequence[Trajectory],
    w: "RewardWeights | np.ndarray",
    discounted: bool = False,
    policy: "SoftPolicy | None" = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> float:
    """Log-likelihood ``sum_xi sum_t log pi_w(a_t|s_t)`` of a set of demonstrations

    Parameters
    ----------
    mdp : Mdp
        Environment
    demos : Sequence[Trajectory]
        Demonstrations
    w : RewardWeights | np.ndarray
        Reward weights
    discounted : bool, optional
        Weight step ``t`` by ``gamma^t``, by default the undiscounted sum
    policy : SoftPolicy | None, optional
        Soft policy of ``w`` if it is already known
    tol, max_iter
        Soft value iteration parameters

    Returns
    -------
    float
        The log-likelihood. A warning is logged if the soft policy did not converge.
    """
    if policy is None:
        policy = soft_value_iteration(mdp, w, tol, max_iter)
    if not policy.converged:
        logger.warning("log-likelihood computed with a non-converged policy")
    return sum(policy_log_prob(mdp, policy, xi, discounted) for xi in demos)


def trajectory_loss(
    mdp: Mdp,
    xi: Trajectory,
    w: "RewardWeights | np.ndarray",
    discounted: bool = False,
    policy: "SoftPolicy | None" = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> float:
    """Loss ``-sum_t log pi_w(a_t|s_t)`` of one trajectory, ``gamma^t`` weighted if
    ``discounted``"""
    return -log_likelihood(mdp, [xi], w, discounted, policy, tol, max_iter)


def gradient(
    mdp: Mdp,
    minibatch: Sequence[Trajectory],
    w: "RewardWeights | np.ndarray",
    mu_mode: "MuEstimator | None" = None,
    rng: "np.random.Generator | None" = None,
    policy: "SoftPolicy | None" = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> np.ndarray:
    """Gradient ``mu_Xi - mu_pi_w`` of the log-likelihood

    Raises
    ------
    IrlException
        If the minibatch is empty
    """
    if len(minibatch) == 0:
        raise IrlException("the minibatch is empty", IrlError.EMPTY_INPUT)
    if mu_mode is None:
        mu_mode = MuEstimator()
    if policy is None:
        policy = soft_value_iteration(mdp, w, tol, max_iter)
    return mu_demo_set(mdp, minibatch).mu - mu_mode.estimate(mdp, policy.pi, rng).mu


def train_step(state: LearnerState, mdp: Mdp, minibatch: Sequence[Trajectory]) -> LearnerState:
    """One gradient ascent update ``w_{t+1} = w_t + eta_t (mu_Xi_t - mu_pi_w_t)``

    Returns
    -------
    LearnerState
        New state with ``t`` incremented and an empty policy cache
    """
    policy = state.policy(mdp)
    step_gradient = gradient(mdp, minibatch, state.w, state.mu_mode, state.rng, policy=policy)
    eta = state.lr_schedule(state.t)
    w = RewardWeights(state.w.w + eta * step_gradient)
    logger.debug(
        "step %d: eta=%.4g |gradient|=%.4g batch=%d",
        state.t,
        eta,
        float(np.linalg.norm(step_gradient)),
        len(minibatch),
    )
    return replace(
        state, w=w, t=state.t + 1, policy_cache=None, last_converged=policy.converged
    )


def record_step(
    state: LearnerState,
    mdp: Mdp,
    step: int,
    callbacks: "Mapping[Metric, MetricCallback] | None",
    selected_count: "int | None" = None,
    lambda_: "float | None" = None,
) -> StepRecord:
    """Evaluate the metric callbacks on the current policy of ``state``"""
    values: dict[Metric, float] = {}
    if callbacks:
        policy = state.policy(mdp)
        values = {metric: float(callback(mdp, policy)) for metric, callback in callbacks.items()}
    return StepRecord(
        step=step,
        feature_mismatch=values.get(Metric.FEATURE_MISMATCH),
        reward_gap=values.get(Metric.REWARD_GAP),
        selected_count=selected_count,
        lambda_=lambda_,
        converged=state.last_converged,
    )


def train(
    state: LearnerState,
    mdp: Mdp,
    schedule: Iterable[Sequence[Trajectory]],
    callbacks: "Mapping[Metric, MetricCallback] | None" = None,
    seed: "int | None" = None,
) -> tuple[LearnerState, RunRecord]:
    """Online MaxEnt IRL: one ``train_step`` per minibatch of ``schedule``

    Parameters
    ----------
    state : LearnerState
        Initial learner
    mdp : Mdp
        Environment
    schedule : Iterable[Sequence[Trajectory]]
        Minibatches, in the order they are given to the learner
    callbacks : Mapping[Metric, MetricCallback] | None, optional
        Metrics evaluated on the learner's policy after every step
    seed : int | None, optional
        Seed stored in the returned record

    Returns
    -------
    tuple[LearnerState, RunRecord]
        Final learner and the per-step trace
    """
    record = RunRecord(seed=seed)
    for step, minibatch in enumerate(schedule, start=1):
        state = train_step(state, mdp, minibatch)
        record.append(record_step(state, mdp, step, callbacks))
    record.final_weights = state.w.w
    return state, record

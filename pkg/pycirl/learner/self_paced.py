"""Self-paced learner: threshold selection of demonstrations and the full-batch baseline"""

import logging
from collections.abc import Mapping
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from ..common import DemoPool, IrlError, IrlException, Mdp, Metric, RewardWeights, Trajectory
from .maxent import LearnerState, MetricCallback, policy_log_prob, record_step, train_step
from .record import RunRecord
from .soft_vi import SoftPolicy, soft_value_iteration

__all__ = []

logger = logging.getLogger(__name__)


class GrowthTrigger(Enum):
    """Rule deciding that the threshold is too small"""

    NOT_GROWING = "not_growing"
    """Grow when the selected set did not grow (``now <= previous``)"""

    SHRINKING = "shrinking"
    """Grow only when the selected set shrank (``now < previous``)"""


class LossForm(Enum):
    """Weighting of the per-step losses of a demonstration"""

    DISCOUNTED = "discounted"
    """``-sum_t gamma^t log pi(a_t|s_t)``"""

    UNDISCOUNTED = "undiscounted"
    """``-sum_t log pi(a_t|s_t)``"""


@dataclass(frozen=True)
class SpirlConfig:
    """Threshold schedule of the self-paced learner

    ``lambda0 = None`` selects the easiest demonstration of the pool at ``w_0``: the initial
    threshold is the smallest loss. ``delta_lambda = 0`` is accepted and freezes the threshold,
    the selection then only changes through the losses.
    """

    delta_lambda: float
    lambda0: "float | None" = None
    growth_trigger: GrowthTrigger = GrowthTrigger.NOT_GROWING
    loss_form: LossForm = LossForm.DISCOUNTED

    def __post_init__(self):
        if not self.delta_lambda >= 0:
            raise IrlException(
                f"delta_lambda must be >= 0, got {self.delta_lambda}", IrlError.INVALID_ARGUMENT
            )


def demo_losses(
    mdp: Mdp, pool: DemoPool, policy: SoftPolicy, loss_form: LossForm = LossForm.DISCOUNTED
) -> np.ndarray:
    """Loss of every demonstration of the pool under ``policy``"""
    discounted = loss_form == LossForm.DISCOUNTED
    return np.array([-policy_log_prob(mdp, policy, xi, discounted) for xi in pool])


def select_demos(
    mdp: Mdp,
    pool: DemoPool,
    w_t: RewardWeights,
    lambda_: float,
    policy: "SoftPolicy | None" = None,
    loss_form: LossForm = LossForm.DISCOUNTED,
) -> list[Trajectory]:
    """Every demonstration whose loss under ``pi_w_t`` is at most ``lambda_``

    The pool is not consumed: the self-paced learner sees the whole batch at every step.
    """
    if policy is None:
        policy = soft_value_iteration(mdp, w_t)
    losses = demo_losses(mdp, pool, policy, loss_form)
    return [pool[i] for i in np.flatnonzero(losses <= lambda_)]


def update_lambda(
    config: SpirlConfig, lambda_: float, selected_now: int, selected_prev: int
) -> float:
    """Increase the threshold by ``delta_lambda`` when the selected set is not growing"""
    if selected_now < 0 or selected_prev < 0:
        raise IrlException("selected counts must be >= 0", IrlError.INVALID_ARGUMENT)
    if config.growth_trigger == GrowthTrigger.SHRINKING:
        too_small = selected_now < selected_prev
    else:
        too_small = selected_now <= selected_prev
    return lambda_ + config.delta_lambda if too_small else lambda_


def spirl_train(
    mdp: Mdp,
    pool: DemoPool,
    init: LearnerState,
    config: SpirlConfig,
    steps: "int | None" = None,
    callbacks: "Mapping[Metric, MetricCallback] | None" = None,
    seed: "int | None" = None,
) -> tuple[LearnerState, RunRecord]:
    """Self-paced MaxEnt IRL

    At every step the learner selects the demonstrations whose loss is below the threshold,
    updates its weights with their feature expectation, and grows the threshold when the
    selection stops growing. An empty selection leaves the weights unchanged but still
    advances ``t`` and the threshold.

    Parameters
    ----------
    mdp : Mdp
        Environment
    pool : DemoPool
        Fixed batch of demonstrations
    init : LearnerState
        Initial learner
    config : SpirlConfig
        Threshold schedule
    steps : int | None, optional
        Number of steps, by default the size of the pool
    callbacks : Mapping[Metric, MetricCallback] | None, optional
        Metrics evaluated after every step
    seed : int | None, optional
        Seed stored in the returned record

    Returns
    -------
    tuple[LearnerState, RunRecord]
        Final learner and the per-step trace, with selected counts and thresholds
    """
    steps = _check_steps(pool, steps)

    state = init
    if config.lambda0 is None:
        lambda_ = float(np.min(demo_losses(mdp, pool, state.policy(mdp), config.loss_form)))
    else:
        lambda_ = float(config.lambda0)
    logger.debug("self-paced learner starts with lambda=%.4g", lambda_)

    record = RunRecord(seed=seed)
    selected_prev = 0
    for step in range(1, steps + 1):
        policy = state.policy(mdp)
        losses = demo_losses(mdp, pool, policy, config.loss_form)
        selected = np.flatnonzero(losses <= lambda_)
        if selected.size:
            state = train_step(state, mdp, [pool[i] for i in selected])
        else:
            state = replace(state, t=state.t + 1, last_converged=policy.converged)
        lambda_ = update_lambda(config, lambda_, int(selected.size), selected_prev)
        selected_prev = int(selected.size)
        record.append(
            record_step(
                state, mdp, step, callbacks, selected_count=selected_prev, lambda_=lambda_
            )
        )
    record.final_weights = state.w.w
    return state, record


def batch_train(
    mdp: Mdp,
    pool: DemoPool,
    init: LearnerState,
    steps: "int | None" = None,
    callbacks: "Mapping[Metric, MetricCallback] | None" = None,
    seed: "int | None" = None,
) -> tuple[LearnerState, RunRecord]:
    """Baseline learner: every step uses the feature expectation of the whole pool"""
    steps = _check_steps(pool, steps)
    demos = list(pool)
    state = init
    record = RunRecord(seed=seed)
    for step in range(1, steps + 1):
        state = train_step(state, mdp, demos)
        record.append(record_step(state, mdp, step, callbacks))
    record.final_weights = state.w.w
    return state, record


def _check_steps(pool: DemoPool, steps: "int | None") -> int:
    if len(pool) == 0:
        raise IrlException("the demonstration pool is empty", IrlError.EMPTY_INPUT)
    steps = len(pool) if steps is None else steps
    if steps < 1:
        raise IrlException(f"steps must be >= 1, got {steps}", IrlError.INVALID_ARGUMENT)
    return steps

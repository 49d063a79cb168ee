"""Teacher-side orderings of a fixed demonstration pool"""

import logging
from collections.abc import Iterator
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..common import DemoPool, IrlError, IrlException, Mdp, RewardWeights, Trajectory
from ..helper import convert_to_array
from ..learner.feature_expectations import mu_trajectory
from ..learner.maxent import policy_log_prob
from ..learner.soft_vi import SoftPolicy, soft_value_iteration

__all__ = []

logger = logging.getLogger(__name__)


class StrategyKind(Enum):
    """Ordering rules"""

    R_CIRL = "r_cirl"
    """Descending reward ``<w*, mu_xi>``"""

    P_CIRL = "p_cirl"
    """Descending log-probability under the expert soft policy"""

    RANDOM = "random"
    """Seeded uniform permutation"""

    ANTI = "anti"
    """Reverse of another ordering"""


@dataclass(frozen=True)
class CurriculumStrategy:
    """Ordering rule, ``seed`` is used by ``RANDOM`` and ``inner`` by ``ANTI``"""

    kind: StrategyKind
    seed: "int | None" = None
    inner: "CurriculumStrategy | None" = None

    def __post_init__(self):
        if self.kind == StrategyKind.ANTI and self.inner is None:
            raise IrlException(
                "an anticurriculum needs an inner strategy", IrlError.INVALID_ARGUMENT
            )

    @staticmethod
    def r_cirl() -> "CurriculumStrategy":
        return CurriculumStrategy(StrategyKind.R_CIRL)

    @staticmethod
    def p_cirl() -> "CurriculumStrategy":
        return CurriculumStrategy(StrategyKind.P_CIRL)

    @staticmethod
    def random(seed: "int | None" = None) -> "CurriculumStrategy":
        return CurriculumStrategy(StrategyKind.RANDOM, seed=seed)

    @staticmethod
    def anti(inner: "CurriculumStrategy") -> "CurriculumStrategy":
        return CurriculumStrategy(StrategyKind.ANTI, inner=inner)

    @property
    def name(self) -> str:
        """Report name: ``r_cirl``, ``p_cirl``, ``random``, ``anti_r``, ``anti_p``..."""
        if self.kind == StrategyKind.ANTI:
            inner = self.inner.name  # type: ignore[union-attr]
            return "anti_" + inner.split("_")[0] if inner.endswith("_cirl") else "anti_" + inner
        return self.kind.value


@dataclass(frozen=True)
class CurriculumContext:
    """What the teacher knows when it orders its pool

    ``expert_policy`` is the soft policy of ``w_star``, computed on demand when missing.
    ``seed`` is used when the strategy itself carries none.
    """

    mdp: Mdp
    w_star: "RewardWeights | None" = None
    expert_policy: "SoftPolicy | None" = None
    seed: "int | None" = None

    def soft_expert(self) -> SoftPolicy:
        if self.expert_policy is not None:
            return self.expert_policy
        if self.w_star is None:
            raise IrlException("P-CIRL needs w* or the expert policy", IrlError.INVALID_ARGUMENT)
        policy = soft_value_iteration(self.mdp, self.w_star)
        object.__setattr__(self, "expert_policy", policy)
        return policy


@dataclass(frozen=True, eq=False)
class Curriculum:
    """Order in which the demonstrations of a pool are given

    ``scores[i]`` is the score of the pool demonstration ``i``, it is ``nan`` for a random
    order.
    """

    order: tuple[int, ...]
    scores: np.ndarray
    strategy: CurriculumStrategy

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(int(i) for i in self.order))
        object.__setattr__(self, "scores", convert_to_array(self.scores))
        if sorted(self.order) != list(range(len(self.order))):
            raise IrlException("order is not a permutation", IrlError.INVALID_ARGUMENT)
        if self.scores.shape != (len(self.order),):
            raise IrlException(
                f"{self.scores.shape[0]} scores for {len(self.order)} demonstrations",
                IrlError.DIMENSION_MISMATCH,
            )

    @property
    def ranks(self) -> np.ndarray:
        """Rank (0 = first given) of every pool demonstration"""
        ranks = np.empty(len(self.order), dtype=np.int64)
        ranks[list(self.order)] = np.arange(len(self.order))
        return ranks

    def __len__(self) -> int:
        return len(self.order)

    def __iter__(self) -> Iterator[int]:
        return iter(self.order)


def score_r_cirl(mdp: Mdp, xi: Trajectory, w_star: "RewardWeights | np.ndarray") -> float:
    """Reward ``<w*, mu_xi>`` of a demonstration, higher is given earlier"""
    w = w_star.w if isinstance(w_star, RewardWeights) else np.asarray(w_star, dtype=float)
    return float(w @ mu_trajectory(mdp, xi).mu)


def score_p_cirl(mdp: Mdp, xi: Trajectory, expert_policy: SoftPolicy) -> float:
    """Log-probability ``sum_t log pi_w*(a_t|s_t)`` of a demonstration, higher is given earlier

    Raises
    ------
    IrlException
        If the score is not finite
    """
    score = policy_log_prob(mdp, expert_policy, xi, discounted=False)
    if not np.isfinite(score):
        raise IrlException(f"P-CIRL score is not finite: {score}", IrlError.NON_FINITE)
    return score


def descending_order(scores: np.ndarray) -> tuple[int, ...]:
    """Indices by descending score, ties by ascending index"""
    scores = np.asarray(scores, dtype=float)
    return tuple(int(i) for i in np.lexsort((np.arange(scores.shape[0]), -scores)))


def build_curriculum(
    pool: DemoPool, strategy: CurriculumStrategy, context: CurriculumContext
) -> Curriculum:
    """Order the demonstrations of ``pool`` with ``strategy``

    Parameters
    ----------
    pool : DemoPool
        Non-empty pool
    strategy : CurriculumStrategy
        Ordering rule
    context : CurriculumContext
        Environment, ``w*``, expert policy and seed as needed by the strategy

    Returns
    -------
    Curriculum
        The ordering and the per-demonstration scores

    Raises
    ------
    IrlException
        If the pool is empty or the context lacks what the strategy needs
    """
    if len(pool) == 0:
        raise IrlException("can not order an empty pool", IrlError.EMPTY_INPUT)

    if strategy.kind == StrategyKind.R_CIRL:
        if context.w_star is None:
            raise IrlException("R-CIRL needs w*", IrlError.INVALID_ARGUMENT)
        scores = np.array([score_r_cirl(context.mdp, xi, context.w_star) for xi in pool])
        return Curriculum(descending_order(scores), scores, strategy)

    if strategy.kind == StrategyKind.P_CIRL:
        expert = context.soft_expert()
        scores = np.array([score_p_cirl(context.mdp, xi, expert) for xi in pool])
        return Curriculum(descending_order(scores), scores, strategy)

    if strategy.kind == StrategyKind.RANDOM:
        seed = strategy.seed if strategy.seed is not None else context.seed
        order = np.random.default_rng(seed).permutation(len(pool))
        return Curriculum(tuple(order), np.full(len(pool), np.nan), strategy)

    inner = build_curriculum(pool, strategy.inner, context)  # type: ignore[arg-type]
    return Curriculum(inner.order[::-1], inner.scores, strategy)


def schedule_minibatches(
    curriculum: Curriculum, pool: DemoPool, batch_size: int = 1
) -> Iterator[list[Trajectory]]:
    """Consecutive chunks of the ordered pool, each demonstration exactly once

    Every demonstration is marked consumed in ``pool`` when its chunk is yielded. The last
    chunk may be smaller than ``batch_size``.

    Raises
    ------
    IrlException
        If ``batch_size < 1`` or the curriculum does not match the pool
    """
    if batch_size < 1:
        raise IrlException(f"batch_size must be >= 1, got {batch_size}", IrlError.INVALID_ARGUMENT)
    if len(curriculum) != len(pool):
        raise IrlException(
            f"curriculum of {len(curriculum)} demonstrations for a pool of {len(pool)}",
            IrlError.DIMENSION_MISMATCH,
        )
    return _chunks(curriculum.order, pool, batch_size)


def _chunks(order: tuple[int, ...], pool: DemoPool, batch_size: int) -> Iterator[list[Trajectory]]:
    for start in range(0, len(order), batch_size):
        chunk = order[start : start + batch_size]
        for index in chunk:
            pool.consume(index)
        yield [pool[index] for index in chunk]

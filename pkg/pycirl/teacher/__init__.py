"""Teacher API

This module contains the benchmark environments, the expert and its demonstrations, and the
curriculum strategies used to order a demonstration pool.
"""

from .curriculum import (
    Curriculum,
    CurriculumContext,
    CurriculumStrategy,
    StrategyKind,
    build_curriculum,
    schedule_minibatches,
    score_p_cirl,
    score_r_cirl,
)
from .environment import Environment, choose_demo_starts
from .expert import ExpertPolicy, ExpertSpec, expert_policy, generate_demos, policy_evaluation
from .gridworld import (
    GridAction,
    GridworldSpec,
    RewardMap,
    build_gridworld,
    goal_cells,
    reward_layout,
)
from .hanoi import HanoiSpec, build_hanoi

__all__ = [
    # curriculum
    "Curriculum",
    "CurriculumContext",
    "CurriculumStrategy",
    "StrategyKind",
    "build_curriculum",
    "schedule_minibatches",
    "score_p_cirl",
    "score_r_cirl",
    # environment
    "Environment",
    "choose_demo_starts",
    # expert
    "ExpertPolicy",
    "ExpertSpec",
    "expert_policy",
    "generate_demos",
    "policy_evaluation",
    # gridworld
    "GridAction",
    "GridworldSpec",
    "RewardMap",
    "build_gridworld",
    "goal_cells",
    "reward_layout",
    # hanoi
    "HanoiSpec",
    "build_hanoi",
]

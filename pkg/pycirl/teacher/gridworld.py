"""Gridworld benchmark with slippery moves and parametric reward maps"""

import logging
from dataclasses import dataclass, field
from enum import Enum, IntEnum

import numpy as np

from ..common import IrlError, IrlException, Mdp, RewardWeights
from .environment import Environment, uniform_initial

__all__ = []

logger = logging.getLogger(__name__)


class GridAction(IntEnum):
    """Gridworld actions, row 0 is the top row"""

    NORTH = 0
    SOUTH = 1
    EAST = 2
    WEST = 3
    STAY = 4


MOVES = {
    GridAction.NORTH: (-1, 0),
    GridAction.SOUTH: (1, 0),
    GridAction.EAST: (0, 1),
    GridAction.WEST: (0, -1),
    GridAction.STAY: (0, 0),
}


class RewardMap(Enum):
    """Parametric reward layouts"""

    SINGLE_GOAL = "single_goal"
    """+1 at the bottom-right cell"""

    OBSTACLE_WALL = "obstacle_wall"
    """+1 at the bottom-right cell, a wall of -1 cells down the middle column, open at the bottom
    row"""

    TWO_GOALS = "two_goals"
    """+1 at the bottom-right cell, +0.5 at the top-right cell, a -1 block in the center"""


def reward_layout(kind: "RewardMap | str", width: int, height: int) -> np.ndarray:
    """Reward map of a preset, array ``[row, col]``"""
    kind = RewardMap(kind)
    if width < 1 or height < 1:
        raise IrlException(
            f"grid size must be positive, got {width}x{height}", IrlError.INVALID_ARGUMENT
        )
    rewards = np.zeros((height, width))
    if kind == RewardMap.OBSTACLE_WALL:
        rewards[: height - 1, width // 2] = -1.0
    elif kind == RewardMap.TWO_GOALS:
        block_w, block_h = max(1, width // 5), max(1, height // 5)
        row, col = (height - block_h) // 2, (width - block_w) // 2
        rewards[row : row + block_h, col : col + block_w] = -1.0
        rewards[0, width - 1] = 0.5
    rewards[height - 1, width - 1] = 1.0
    return rewards


def goal_cells(rewards: np.ndarray) -> frozenset[tuple[int, int]]:
    """``(row, col)`` of the positive cells of a reward map ``[row, col]``"""
    return frozenset((int(row), int(col)) for row, col in np.argwhere(np.asarray(rewards) > 0))


@dataclass(frozen=True)
class GridworldSpec:
    """Gridworld description

    Parameters
    ----------
    width, height : int
        Grid size
    reward_map : tuple[float, ...]
        Row-major reward of every cell
    slip_prob : float, optional
        Probability that a uniformly random action is executed instead of the chosen one
    absorbing_cells : frozenset[tuple[int, int]], optional
        ``(row, col)`` of the cells which end an episode
    gamma : float, optional
        Discount factor, by default 0.9
    horizon_cap : int | None, optional
        Demonstration length, by default ``2 * (width + height)``
    terminal_cells : frozenset[tuple[int, int]], optional
        ``(row, col)`` of the goal cells whose reward is collected once: every action taken in
        a terminal cell leads to an extra absorbing exit state
    """

    width: int
    height: int
    reward_map: tuple[float, ...]
    slip_prob: float = 0.0
    absorbing_cells: frozenset[tuple[int, int]] = field(default_factory=frozenset)
    gamma: float = 0.9
    horizon_cap: "int | None" = None
    terminal_cells: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise IrlException(
                f"grid size must be positive, got {self.width}x{self.height}",
                IrlError.INVALID_ARGUMENT,
            )
        object.__setattr__(self, "reward_map", tuple(float(r) for r in self.reward_map))
        if len(self.reward_map) != self.width * self.height:
            raise IrlException(
                f"reward_map has {len(self.reward_map)} cells, expected "
                f"{self.width * self.height}",
                IrlError.DIMENSION_MISMATCH,
            )
        if not np.all(np.isfinite(self.reward_map)):
            raise IrlException("reward_map must be finite", IrlError.NON_FINITE)
        if not 0.0 <= self.slip_prob < 1.0:
            raise IrlException(
                f"slip_prob must be in [0, 1), got {self.slip_prob}", IrlError.INVALID_ARGUMENT
            )
        if not 0.0 <= self.gamma < 1.0:
            raise IrlException(
                f"gamma must be in [0, 1), got {self.gamma}", IrlError.INVALID_ARGUMENT
            )
        for name in ("absorbing_cells", "terminal_cells"):
            cells = frozenset((int(r), int(c)) for r, c in getattr(self, name))
            for row, col in cells:
                if not (0 <= row < self.height and 0 <= col < self.width):
                    raise IrlException(
                        f"{name[:-6]} cell ({row}, {col}) outside the grid",
                        IrlError.INVALID_ARGUMENT,
                    )
            object.__setattr__(self, name, cells)
        if self.absorbing_cells & self.terminal_cells:
            raise IrlException(
                "a cell can not be both absorbing and terminal", IrlError.INVALID_ARGUMENT
            )
        if self.horizon_cap is not None and self.horizon_cap < 1:
            raise IrlException(
                f"horizon_cap must be >= 1, got {self.horizon_cap}", IrlError.INVALID_ARGUMENT
            )

    @staticmethod
    def preset(
        kind: "RewardMap | str",
        width: int = 5,
        height: int = 5,
        terminal_goals: bool = False,
        **kwargs,
    ) -> "GridworldSpec":
        """Spec of one of the parametric reward maps, extra arguments are spec fields

        ``terminal_goals`` makes every cell with a positive reward terminal.
        """
        rewards = reward_layout(kind, width, height)
        if terminal_goals:
            kwargs["terminal_cells"] = goal_cells(rewards)
        return GridworldSpec(width, height, tuple(rewards.ravel()), **kwargs)

    @property
    def n_cells(self) -> int:
        return self.width * self.height

    @property
    def n_states(self) -> int:
        """Cells, plus the exit state when the grid has terminal cells"""
        return self.n_cells + 1 if self.terminal_cells else self.n_cells

    @property
    def exit_state(self) -> "int | None":
        """Absorbing state reached from the terminal cells, it comes after the cells"""
        return self.n_cells if self.terminal_cells else None

    @property
    def horizon(self) -> int:
        return 2 * (self.width + self.height) if self.horizon_cap is None else self.horizon_cap

    def cell(self, row: int, col: int) -> int:
        """State index of ``(row, col)``"""
        return row * self.width + col

    def position(self, s: int) -> tuple[int, int]:
        """``(row, col)`` of the state index ``s``"""
        return divmod(s, self.width)

    def move(self, s: int, action: GridAction) -> int:
        """Cell reached from ``s`` by ``action``, moves off the grid stay in place"""
        row, col = self.position(s)
        d_row, d_col = MOVES[GridAction(action)]
        row, col = row + d_row, col + d_col
        if not (0 <= row < self.height and 0 <= col < self.width):
            return s
        return self.cell(row, col)


def build_gridworld(spec: GridworldSpec, name: str = "gridworld") -> Environment:
    """Build the gridworld MDP of ``spec``

    With probability ``1 - slip_prob`` the chosen move is executed, otherwise the move of a
    uniformly drawn action: the intended cell gets ``1 - slip_prob + slip_prob / 5``. Features
    are one-hot per cell, zero on absorbing cells, and ``w*`` is the L1-normalized reward map.

    Every action taken in a terminal cell leads to the exit state, which is absorbing with zero
    features, so the reward of a terminal cell is collected once and demonstrations end there.
    """
    n_cells, n_states, n_actions = spec.n_cells, spec.n_states, len(GridAction)
    absorbing = frozenset(spec.cell(row, col) for row, col in spec.absorbing_cells)
    terminal = frozenset(spec.cell(row, col) for row, col in spec.terminal_cells)
    if spec.exit_state is not None:
        absorbing = absorbing | {spec.exit_state}

    transition = np.zeros((n_states, n_actions, n_states))
    features = np.zeros((n_states, n_actions, n_cells))
    for s in range(n_states):
        if s in absorbing:
            transition[s, :, s] = 1.0
            continue
        features[s, :, s] = 1.0
        if s in terminal:
            transition[s, :, spec.exit_state] = 1.0
            continue
        targets = [spec.move(s, action) for action in GridAction]
        for action, target in zip(GridAction, targets):
            transition[s, action, target] += 1.0 - spec.slip_prob
            for other in targets:
                transition[s, action, other] += spec.slip_prob / n_actions

    mdp = Mdp(transition, spec.gamma, uniform_initial(n_states, absorbing), features)
    labels = tuple(f"({row},{col})" for row, col in map(spec.position, range(n_cells)))
    if spec.exit_state is not None:
        labels += ("exit",)
    logger.debug("built %dx%d %s, slip %.3g", spec.width, spec.height, name, spec.slip_prob)
    return Environment(
        name,
        mdp,
        RewardWeights.normalized(spec.reward_map),
        labels,
        absorbing,
        spec.horizon,
    )

"""Towers of Hanoi benchmark with a sparse goal reward"""

import itertools
import logging
from dataclasses import dataclass

import numpy as np

from ..common import IrlError, IrlException, Mdp, RewardWeights
from .environment import Environment, uniform_initial

__all__ = []

logger = logging.getLogger(__name__)

DEFAULT_HORIZON = 40


@dataclass(frozen=True)
class HanoiSpec:
    """Towers of Hanoi description

    Disk 0 is the smallest. A state gives the rod of every disk and is encoded as
    ``sum_i rod_i * n_rods**i``.
    """

    n_disks: int = 4
    n_rods: int = 3
    gamma: float = 0.9
    target_rod: "int | None" = None
    """Rod of the goal configuration, by default the last one"""
    horizon: int = DEFAULT_HORIZON

    def __post_init__(self):
        if self.n_disks < 1:
            raise IrlException(
                f"n_disks must be >= 1, got {self.n_disks}", IrlError.INVALID_ARGUMENT
            )
        if self.n_rods < 3:
            raise IrlException(
                f"n_rods must be >= 3, got {self.n_rods}", IrlError.INVALID_ARGUMENT
            )
        if not 0 <= self.goal_rod < self.n_rods:
            raise IrlException(
                f"target_rod {self.target_rod} out of range", IrlError.INVALID_ARGUMENT
            )
        if not 0.0 <= self.gamma < 1.0:
            raise IrlException(
                f"gamma must be in [0, 1), got {self.gamma}", IrlError.INVALID_ARGUMENT
            )
        if self.horizon < 1:
            raise IrlException(
                f"horizon must be >= 1, got {self.horizon}", IrlError.INVALID_ARGUMENT
            )

    @property
    def goal_rod(self) -> int:
        return self.n_rods - 1 if self.target_rod is None else self.target_rod

    @property
    def n_states(self) -> int:
        return self.n_rods**self.n_disks

    @property
    def moves(self) -> list[tuple[int, int]]:
        """Actions as ``(source rod, target rod)`` pairs"""
        return list(itertools.permutations(range(self.n_rods), 2))

    @property
    def goal_state(self) -> int:
        return self.encode([self.goal_rod] * self.n_disks)

    def encode(self, rods) -> int:
        """State index of the configuration ``rods[disk]``"""
        if len(rods) != self.n_disks:
            raise IrlException(
                f"expected {self.n_disks} rods, got {len(rods)}", IrlError.DIMENSION_MISMATCH
            )
        return sum(int(rod) * self.n_rods**disk for disk, rod in enumerate(rods))

    def decode(self, s: int) -> tuple[int, ...]:
        """Rod of every disk in the state ``s``"""
        rods = []
        for _ in range(self.n_disks):
            s, rod = divmod(s, self.n_rods)
            rods.append(rod)
        return tuple(rods)

    def apply(self, s: int, move: tuple[int, int]) -> int:
        """State reached by ``move``, illegal moves leave the state unchanged"""
        source, target = move
        rods = list(self.decode(s))
        on_source = [disk for disk, rod in enumerate(rods) if rod == source]
        on_target = [disk for disk, rod in enumerate(rods) if rod == target]
        if not on_source:
            return s
        if on_target and min(on_target) < min(on_source):
            return s
        rods[min(on_source)] = target
        return self.encode(rods)

    def legal_moves(self, s: int) -> list[tuple[int, int]]:
        return [move for move in self.moves if self.apply(s, move) != s]


def build_hanoi(spec: "HanoiSpec | None" = None, name: str = "hanoi") -> Environment:
    """Build the Towers of Hanoi MDP

    Transitions are deterministic. The feature of a move is the one-hot of the configuration it
    reaches and ``w*`` is one-hot at the goal configuration, so the reward is paid by the move
    that completes the puzzle. The goal is absorbing with zero features.
    """
    spec = HanoiSpec() if spec is None else spec
    n_states, moves = spec.n_states, spec.moves
    goal = spec.goal_state

    transition = np.zeros((n_states, len(moves), n_states))
    features = np.zeros((n_states, len(moves), n_states))
    transition[goal, :, goal] = 1.0
    for s in range(n_states):
        if s == goal:
            continue
        for a, move in enumerate(moves):
            reached = spec.apply(s, move)
            transition[s, a, reached] = 1.0
            features[s, a, reached] = 1.0

    absorbing = frozenset([goal])
    mdp = Mdp(transition, spec.gamma, uniform_initial(n_states, absorbing), features)
    w_star = np.zeros(n_states)
    w_star[goal] = 1.0
    labels = tuple("".join(map(str, spec.decode(s))) for s in range(n_states))
    logger.debug("built %s with %d states, goal %d", name, n_states, goal)
    return Environment(
        name, mdp, RewardWeights(w_star, expert=True), labels, absorbing, spec.horizon
    )

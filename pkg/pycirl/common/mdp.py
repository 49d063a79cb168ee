"""Tabular MDP, linear reward, demonstrations and their validation"""

from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from ..helper import convert_to_array
from .enums import ViolationKind
from .errors import IrlError, IrlException

__all__ = []

STOCHASTIC_TOL = 1e-9


class Mdp:
    """Finite MDP with a feature map, the reward itself is given by ``RewardWeights``

    States and actions are dense indices ``0..n-1``. Every array is copied and made read-only
    so an instance can be shared between runs.

    Parameters
    ----------
    transition : array_like
        Tensor ``[s, a, s']`` of transition probabilities
    gamma : float
        Discount factor
    p0 : array_like
        Initial state distribution
    features : array_like | Callable[[int, int], array_like]
        Tensor ``[s, a, k]`` or a function returning the feature vector of ``(s, a)``
    feature_dim : int | None, optional
        Declared feature dimension, by default the last dimension of ``features``
    """

    def __init__(
        self,
        transition,
        gamma: float,
        p0,
        features: "np.ndarray | Sequence | Callable[[int, int], Sequence[float]]",
        feature_dim: "int | None" = None,
    ) -> None:
        transition = convert_to_array(transition)
        if transition.ndim != 3 or transition.shape[0] != transition.shape[2]:
            raise IrlException(
                f"transition must have shape (S, A, S), got {transition.shape}",
                IrlError.DIMENSION_MISMATCH,
            )
        n_states, n_actions, _ = transition.shape
        if n_states < 1 or n_actions < 1:
            raise IrlException(
                "an MDP needs at least one state and one action", IrlError.EMPTY_INPUT
            )

        p0 = convert_to_array(p0)
        if p0.shape != (n_states,):
            raise IrlException(
                f"p0 must have shape ({n_states},), got {p0.shape}", IrlError.DIMENSION_MISMATCH
            )

        if callable(features):
            rows = [
                [np.asarray(features(s, a), dtype=float) for a in range(n_actions)]
                for s in range(n_states)
            ]
            lengths = {row.shape for line in rows for row in line}
            if len(lengths) != 1:
                raise IrlException(
                    f"feature vectors have different shapes {sorted(lengths)}",
                    IrlError.DIMENSION_MISMATCH,
                )
            features = np.array(rows, dtype=float)
        features = convert_to_array(features)
        if features.ndim != 3 or features.shape[:2] != (n_states, n_actions):
            raise IrlException(
                f"features must have shape ({n_states}, {n_actions}, d), got {features.shape}",
                IrlError.DIMENSION_MISMATCH,
            )

        self._transition = transition
        self._gamma = float(gamma)
        self._p0 = p0
        self._features = features
        self._feature_dim = int(features.shape[2]) if feature_dim is None else int(feature_dim)

    @property
    def n_states(self) -> int:
        """Number of states ``|S|``"""
        return self._transition.shape[0]

    @property
    def n_actions(self) -> int:
        """Number of actions ``|A|``"""
        return self._transition.shape[1]

    @property
    def transition(self) -> np.ndarray:
        """Tensor ``[s, a, s']`` of transition probabilities"""
        return self._transition

    @property
    def gamma(self) -> float:
        """Discount factor"""
        return self._gamma

    @property
    def p0(self) -> np.ndarray:
        """Initial state distribution"""
        return self._p0

    @property
    def features(self) -> np.ndarray:
        """Tensor ``[s, a, k]`` of feature vectors"""
        return self._features

    @property
    def feature_dim(self) -> int:
        """Dimension ``d`` of the feature vectors"""
        return self._feature_dim

    @property
    def max_feature(self) -> float:
        """Largest absolute feature entry"""
        if self._features.size == 0:
            return 0.0
        return float(np.max(np.abs(self._features)))

    def feature(self, s: int, a: int) -> np.ndarray:
        """Feature vector of ``(s, a)``"""
        self.check_state(s)
        self.check_action(a)
        return self._features[s, a]

    def reward_matrix(self, w: "RewardWeights | np.ndarray") -> np.ndarray:
        """Reward of every state-action pair, matrix ``[s, a]``"""
        w = _weights_vector(w, self._feature_dim)
        return self._features @ w

    def check_state(self, s: int):
        """Raise an ``IrlException`` if ``s`` is not a state index"""
        if not 0 <= int(s) < self.n_states:
            raise IrlException(
                f"state {s} out of range [0, {self.n_states})", IrlError.INDEX_OUT_OF_RANGE
            )

    def check_action(self, a: int):
        """Raise an ``IrlException`` if ``a`` is not an action index"""
        if not 0 <= int(a) < self.n_actions:
            raise IrlException(
                f"action {a} out of range [0, {self.n_actions})", IrlError.INDEX_OUT_OF_RANGE
            )

    def with_initial_distribution(self, p0) -> "Mdp":
        """Return a copy of the MDP with another initial distribution"""
        return Mdp(self._transition, self._gamma, p0, self._features, self._feature_dim)

    def __repr__(self) -> str:
        return (
            f"Mdp(n_states={self.n_states}, n_actions={self.n_actions}, "
            f"feature_dim={self.feature_dim}, gamma={self.gamma})"
        )


class RewardWeights:
    """Weight vector ``w`` of the linear reward ``R_w(s, a) = <w, phi(s, a)>``

    Parameters
    ----------
    w : array_like
        Finite weight vector
    expert : bool, optional
        Tag the vector as the expert weights ``w*``, which requires ``||w||_1 <= 1``
    """

    def __init__(self, w, expert: bool = False) -> None:
        w = convert_to_array(w)
        if w.ndim != 1:
            raise IrlException(
                f"weights must be a vector, got {w.shape}", IrlError.DIMENSION_MISMATCH
            )
        if not np.all(np.isfinite(w)):
            raise IrlException("weights must be finite", IrlError.NON_FINITE)
        if expert and np.sum(np.abs(w)) > 1.0 + 1e-12:
            raise IrlException(
                f"expert weights must have an L1 norm <= 1, got {np.sum(np.abs(w))}",
                IrlError.INVALID_ARGUMENT,
            )
        self._w = w
        self._expert = expert

    @staticmethod
    def uniform(
        dim: int, rng: np.random.Generator, low: float = -1.0, high: float = 1.0
    ) -> "RewardWeights":
        """Draw weights uniformly in ``[low, high]^dim``"""
        return RewardWeights(rng.uniform(low, high, size=dim))

    @staticmethod
    def normalized(values) -> "RewardWeights":
        """Expert weights obtained by L1-normalizing ``values`` (zero stays zero)"""
        values = np.asarray(values, dtype=float)
        norm = np.sum(np.abs(values))
        if norm > 0:
            values = values / norm
        return RewardWeights(values, expert=True)

    @property
    def w(self) -> np.ndarray:
        """The weight vector"""
        return self._w

    @property
    def dim(self) -> int:
        return self._w.shape[0]

    @property
    def is_expert(self) -> bool:
        """Whether the vector is tagged as the expert weights ``w*``"""
        return self._expert

    def __len__(self) -> int:
        return self.dim

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RewardWeights):
            return NotImplemented
        return np.array_equal(self._w, other._w)

    def __hash__(self) -> int:
        return hash(self._w.tobytes())

    def __repr__(self) -> str:
        return f"RewardWeights({self._w.tolist()}, expert={self._expert})"


class Trajectory:
    """Finite, non-empty sequence of ``(state, action)`` pairs"""

    def __init__(self, steps: Iterable[tuple[int, int]]) -> None:
        steps = tuple((int(s), int(a)) for s, a in steps)
        if not steps:
            raise IrlException("a trajectory needs at least one step", IrlError.EMPTY_INPUT)
        if any(s < 0 or a < 0 for s, a in steps):
            raise IrlException("negative state or action index", IrlError.INDEX_OUT_OF_RANGE)
        self._steps = steps
        self._states = convert_to_array([s for s, _ in steps], dtype=np.int64)
        self._actions = convert_to_array([a for _, a in steps], dtype=np.int64)

    @property
    def steps(self) -> tuple[tuple[int, int], ...]:
        return self._steps

    @property
    def states(self) -> np.ndarray:
        """Visited states, in order"""
        return self._states

    @property
    def actions(self) -> np.ndarray:
        """Taken actions, in order"""
        return self._actions

    @property
    def horizon(self) -> int:
        """Number of recorded steps ``H``"""
        return len(self._steps)

    @property
    def start_state(self) -> int:
        return self._steps[0][0]

    def check(self, mdp: Mdp):
        """Raise an ``IrlException`` if a step does not belong to ``mdp``"""
        if self._states.max() >= mdp.n_states or self._actions.max() >= mdp.n_actions:
            raise IrlException(
                f"trajectory leaves the MDP ({mdp.n_states} states, {mdp.n_actions} actions)",
                IrlError.INDEX_OUT_OF_RANGE,
            )

    def __len__(self) -> int:
        return len(self._steps)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self._steps)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Trajectory):
            return NotImplemented
        return self._steps == other._steps

    def __hash__(self) -> int:
        return hash(self._steps)

    def __repr__(self) -> str:
        return f"Trajectory({list(self._steps)})"


class DemoPool:
    """Fixed, ordered batch of demonstrations

    Consumption only sets a flag, the demonstrations themselves are never removed.
    """

    def __init__(self, demos: Iterable[Trajectory]) -> None:
        self._demos = tuple(demos)
        self._consumed = np.zeros(len(self._demos), dtype=bool)

    @property
    def demos(self) -> tuple[Trajectory, ...]:
        return self._demos

    @property
    def start_states(self) -> list[int]:
        """Start state of every demonstration"""
        return [demo.start_state for demo in self._demos]

    @property
    def n_consumed(self) -> int:
        return int(self._consumed.sum())

    def consume(self, index: int):
        """Mark the demonstration ``index`` as given to the learner"""
        self._consumed[index] = True

    def is_consumed(self, index: int) -> bool:
        return bool(self._consumed[index])

    def remaining(self) -> list[int]:
        """Indices of the demonstrations which have not been consumed"""
        return [int(i) for i in np.flatnonzero(~self._consumed)]

    def copy(self) -> "DemoPool":
        """Same demonstrations with fresh consumption flags"""
        return DemoPool(self._demos)

    def check(self, mdp: Mdp):
        for demo in self._demos:
            demo.check(mdp)

    def __len__(self) -> int:
        return len(self._demos)

    def __getitem__(self, index: int) -> Trajectory:
        return self._demos[index]

    def __iter__(self) -> Iterator[Trajectory]:
        return iter(self._demos)


@dataclass(frozen=True)
class Violation:
    """Broken ``Mdp`` invariant"""

    kind: ViolationKind
    index: tuple[int, ...]
    message: str


def reward(mdp: Mdp, w: "RewardWeights | np.ndarray", s: int, a: int) -> float:
    """Reward ``<w, phi(s, a)>`` of one state-action pair

    Raises
    ------
    IrlException
        If ``s`` or ``a`` is out of range, or ``w`` has the wrong dimension
    """
    return float(mdp.feature(s, a) @ _weights_vector(w, mdp.feature_dim))


def validate(mdp: Mdp) -> list[Violation]:
    """Check every invariant of ``mdp``

    Returns
    -------
    list[Violation]
        All the violations found, an empty list means the MDP is valid
    """
    violations: list[Violation] = []
    transition = mdp.transition

    for s, a, s_next in zip(*np.nonzero(~np.isfinite(transition))):
        violations.append(
            Violation(
                ViolationKind.TRANSITION_NOT_FINITE,
                (int(s), int(a), int(s_next)),
                f"T({s_next}|{s},{a}) = {transition[s, a, s_next]} is not finite",
            )
        )
    for s, a, s_next in zip(*np.nonzero(transition < 0)):
        violations.append(
            Violation(
                ViolationKind.NEGATIVE_TRANSITION,
                (int(s), int(a), int(s_next)),
                f"T({s_next}|{s},{a}) = {transition[s, a, s_next]} < 0",
            )
        )
    sums = transition.sum(axis=2)
    for s, a in zip(*np.nonzero(np.abs(sums - 1.0) > STOCHASTIC_TOL)):
        violations.append(
            Violation(
                ViolationKind.TRANSITION_NOT_NORMALIZED,
                (int(s), int(a)),
                f"transition row ({s},{a}) sums to {sums[s, a]}",
            )
        )

    for s in np.flatnonzero(~np.isfinite(mdp.p0)):
        violations.append(
            Violation(
                ViolationKind.INITIAL_NOT_FINITE, (int(s),), f"p0[{s}] = {mdp.p0[s]} is not finite"
            )
        )
    for s in np.flatnonzero(mdp.p0 < 0):
        violations.append(
            Violation(ViolationKind.NEGATIVE_INITIAL, (int(s),), f"p0[{s}] = {mdp.p0[s]} < 0")
        )
    if abs(mdp.p0.sum() - 1.0) > STOCHASTIC_TOL:
        violations.append(
            Violation(ViolationKind.INITIAL_NOT_NORMALIZED, (), f"p0 sums to {mdp.p0.sum()}")
        )

    if mdp.features.shape[2] != mdp.feature_dim:
        violations.append(
            Violation(
                ViolationKind.FEATURE_LENGTH,
                (),
                f"feature vectors have length {mdp.features.shape[2]}, expected {mdp.feature_dim}",
            )
        )
    for s, a in zip(*np.nonzero(~np.all(np.isfinite(mdp.features), axis=2))):
        violations.append(
            Violation(
                ViolationKind.FEATURE_NOT_FINITE, (int(s), int(a)), f"phi({s},{a}) is not finite"
            )
        )

    if not 0.0 <= mdp.gamma < 1.0:
        violations.append(
            Violation(ViolationKind.GAMMA_OUT_OF_RANGE, (), f"gamma = {mdp.gamma} not in [0, 1)")
        )
    return violations


def _weights_vector(w: "RewardWeights | np.ndarray", dim: int) -> np.ndarray:
    vector = w.w if isinstance(w, RewardWeights) else np.asarray(w, dtype=float)
    if vector.shape != (dim,):
        raise IrlException(
            f"weights have shape {vector.shape}, expected ({dim},)", IrlError.DIMENSION_MISMATCH
        )
    return vector

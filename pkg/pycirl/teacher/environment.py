"""Built environment: MDP, expert weights and state labels"""

from dataclasses import dataclass, field

import numpy as np

from ..common import IrlError, IrlException, Mdp, RewardWeights

__all__ = []


@dataclass(frozen=True)
class Environment:
    """Benchmark environment as given to the teacher and the learner

    Parameters
    ----------
    name : str
        Short name used in reports
    mdp : Mdp
        Dynamics, discount and features. ``p0`` is uniform over the non-absorbing states until
        the harness replaces it with the distribution of the demonstration starts.
    w_star : RewardWeights
        Expert weights, ``||w*||_1 <= 1``
    labels : tuple[str, ...]
        Human readable name of every state
    absorbing : frozenset[int]
        States which self-loop under every action
    default_horizon : int
        Default demonstration length
    """

    name: str
    mdp: Mdp
    w_star: RewardWeights
    labels: tuple[str, ...]
    absorbing: frozenset[int] = field(default_factory=frozenset)
    default_horizon: int = 40

    def __post_init__(self):
        if len(self.labels) != self.mdp.n_states:
            raise IrlException(
                f"{len(self.labels)} labels for {self.mdp.n_states} states",
                IrlError.DIMENSION_MISMATCH,
            )
        if self.w_star.dim != self.mdp.feature_dim:
            raise IrlException(
                f"w* has dimension {self.w_star.dim}, features {self.mdp.feature_dim}",
                IrlError.DIMENSION_MISMATCH,
            )

    @property
    def non_absorbing(self) -> list[int]:
        return [s for s in range(self.mdp.n_states) if s not in self.absorbing]

    def label(self, s: int) -> str:
        self.mdp.check_state(s)
        return self.labels[s]

    def with_initial_states(self, states) -> "Environment":
        """Same environment with ``p0`` uniform over ``states`` (repeats count)"""
        states = np.asarray(states, dtype=np.int64)
        if states.size == 0:
            raise IrlException("no initial state", IrlError.EMPTY_INPUT)
        for s in states:
            self.mdp.check_state(s)
        p0 = np.bincount(states, minlength=self.mdp.n_states) / states.size
        return Environment(
            self.name,
            self.mdp.with_initial_distribution(p0),
            self.w_star,
            self.labels,
            self.absorbing,
            self.default_horizon,
        )


def uniform_initial(n_states: int, absorbing: frozenset[int]) -> np.ndarray:
    """Uniform distribution over the non-absorbing states"""
    p0 = np.ones(n_states)
    p0[list(absorbing)] = 0.0
    if p0.sum() == 0:
        raise IrlException("every state is absorbing", IrlError.INVALID_ARGUMENT)
    return p0 / p0.sum()


def choose_demo_starts(
    env: Environment, n: int, rng: np.random.Generator, include_absorbing: bool = False
) -> list[int]:
    """Seeded sample of ``n`` distinct start states, in ascending order

    Parameters
    ----------
    env : Environment
        Environment
    n : int
        Number of start states
    rng : np.random.Generator
        Generator
    include_absorbing : bool, optional
        Also draw absorbing states, by default only the non-absorbing ones

    Raises
    ------
    IrlException
        If ``n`` is not in ``[1, number of candidates]``
    """
    candidates = list(range(env.mdp.n_states)) if include_absorbing else env.non_absorbing
    if not 1 <= n <= len(candidates):
        raise IrlException(
            f"can not draw {n} distinct start states out of {len(candidates)}",
            IrlError.INVALID_ARGUMENT,
        )
    return sorted(int(s) for s in rng.choice(candidates, size=n, replace=False))

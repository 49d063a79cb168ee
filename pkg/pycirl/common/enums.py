"""Enums shared between the learner, the teacher and the harness"""

from enum import Enum


class ViolationKind(Enum):
    """Kind of broken ``Mdp`` invariant reported by ``validate``"""

    NEGATIVE_TRANSITION = 0
    """A transition probability is negative"""

    TRANSITION_NOT_NORMALIZED = 1
    """``transition[s, a, :]`` does not sum to one"""

    NEGATIVE_INITIAL = 2
    """An entry of the initial distribution is negative"""

    INITIAL_NOT_NORMALIZED = 3
    """The initial distribution does not sum to one"""

    FEATURE_LENGTH = 4
    """A feature vector does not have ``feature_dim`` entries"""

    FEATURE_NOT_FINITE = 5
    """A feature vector contains NaN or infinite values"""

    GAMMA_OUT_OF_RANGE = 6
    """The discount factor is not in [0, 1)"""

    TRANSITION_NOT_FINITE = 7
    """A transition probability is NaN or infinite"""

    INITIAL_NOT_FINITE = 8
    """An entry of the initial distribution is NaN or infinite"""


class MuMethod(Enum):
    """How a feature expectation vector has been computed"""

    EXACT = "exact"
    """Discounted occupancy of the policy, truncated at a tolerance"""

    MONTE_CARLO = "mc"
    """Mean over sampled rollouts"""

    EMPIRICAL = "empirical"
    """Discounted feature sum of recorded demonstrations"""


class Metric(Enum):
    """Error metric recorded after every training step"""

    FEATURE_MISMATCH = "feature_mismatch"
    """L2 distance between the learner's and the expert's feature expectations"""

    REWARD_GAP = "reward_gap"
    """Expected true reward of the expert minus the one of the learner"""

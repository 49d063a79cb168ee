"""Common API shared by the learner, the teacher and the harness"""

from .enums import Metric, MuMethod, ViolationKind
from .errors import IrlError, IrlException
from .mdp import DemoPool, Mdp, RewardWeights, Trajectory, Violation, reward, validate
from .serialization import (
    dump_mdp,
    dump_pool,
    load_environment_document,
    load_mdp,
    load_pool,
    save_environment_document,
)

__all__ = [
    # enums
    "Metric",
    "MuMethod",
    "ViolationKind",
    # errors
    "IrlError",
    "IrlException",
    # mdp
    "DemoPool",
    "Mdp",
    "RewardWeights",
    "Trajectory",
    "Violation",
    "reward",
    "validate",
    # serialization
    "dump_mdp",
    "dump_pool",
    "load_environment_document",
    "load_mdp",
    "load_pool",
    "save_environment_document",
]

"""Error codes and exception shared by the learner, the teacher and the harness"""

from enum import Enum


class IrlError(Enum):
    """Used to describe the reason of a failure"""

    INVALID_ARGUMENT = 1
    """An argument is outside of its domain (negative count, tolerance, ...)"""

    INDEX_OUT_OF_RANGE = 2
    """A state or action index is not part of the MDP"""

    NON_FINITE = 3
    """A vector contains NaN or infinite values"""

    NOT_STOCHASTIC = 4
    """A distribution or a policy row does not sum to one or has negative entries"""

    EMPTY_INPUT = 5
    """A collection that must not be empty is empty"""

    DIMENSION_MISMATCH = 6
    """Two vectors or tensors have incompatible shapes"""

    INVALID_CONFIG = 7
    """The experiment configuration is malformed"""

    IO_FAILURE = 8
    """A file could not be read or written"""


class IrlException(Exception):
    def __init__(self, message: str, error_code: IrlError, *args: object) -> None:
        super().__init__(message, *args)
        self.message = message
        self.error_code = error_code

    def __str__(self) -> str:
        return f"{self.message} ({self.error_code})"

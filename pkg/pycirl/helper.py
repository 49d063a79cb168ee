import hashlib
import math

import numpy as np


def convert_to_array(values, dtype=float) -> np.ndarray:
    """Convert a sequence or an array to a read-only numpy array

    Parameters
    ----------
    values : array_like
        Values to convert
    dtype : data-type, optional
        Requested dtype, by default float

    Returns
    -------
    np.ndarray
        A copy of the values which can not be written
    """
    array = np.array(values, dtype=dtype, copy=True)
    array.flags.writeable = False
    return array


def convert_to_generator(seed: "int | np.random.Generator | None") -> np.random.Generator:
    """Return ``seed`` if it is already a generator, otherwise a new seeded generator"""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def format_float(value: "float | None") -> str:
    """Format a float for CSV output, an empty string stands for a missing value"""
    if value is None:
        return ""
    return repr(float(value))


def weights_digest(values: np.ndarray) -> str:
    """SHA-256 of the float64 representation of a weight vector"""
    data = np.ascontiguousarray(values, dtype=np.float64).tobytes()
    return hashlib.sha256(data).hexdigest()


def truncation_horizon(gamma: float, tol: float, max_feature: float = 1.0) -> int:
    """Smallest ``k`` such that the geometric tail ``gamma**k / (1 - gamma) * max_feature`` is
    below ``tol``

    Parameters
    ----------
    gamma : float
        Discount factor in [0, 1)
    tol : float
        Tolerance on the neglected tail
    max_feature : float, optional
        Bound on the feature magnitude, by default 1.0

    Returns
    -------
    int
        Number of terms to keep, at least 1
    """
    if gamma <= 0.0 or max_feature <= 0.0:
        return 1
    bound = tol * (1.0 - gamma) / max_feature
    if bound >= 1.0:
        return 1
    return max(1, math.ceil(math.log(bound) / math.log(gamma)))

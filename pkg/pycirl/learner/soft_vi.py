"""Soft Bellman operator and Soft Value Iteration"""

import logging

import numpy as np
from scipy.special import logsumexp

from ..common import IrlError, IrlException, Mdp, RewardWeights

__all__ = []

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 10_000


class SoftPolicy:
    """MaxEnt policy ``pi_w = exp(Q_w - V_w)`` with the tables it has been derived from"""

    def __init__(
        self,
        q: np.ndarray,
        v: np.ndarray,
        weights_used: RewardWeights,
        residuals: "list[float]",
        tol: float,
    ) -> None:
        self._q = q
        self._v = v
        self._log_pi = q - v[:, np.newaxis]
        self._pi = np.exp(self._log_pi)
        for array in (self._q, self._v, self._log_pi, self._pi):
            array.flags.writeable = False
        self._weights_used = weights_used
        self._residuals = tuple(residuals)
        self._tol = tol

    @property
    def q(self) -> np.ndarray:
        """Soft state-action values ``Q_w``, matrix ``[s, a]``"""
        return self._q

    @property
    def v(self) -> np.ndarray:
        """Soft state values ``V_w = log sum_a exp Q_w``"""
        return self._v

    @property
    def pi(self) -> np.ndarray:
        """Action probabilities, matrix ``[s, a]`` with rows summing to one"""
        return self._pi

    @property
    def log_pi(self) -> np.ndarray:
        """``Q_w - V_w``, the log of ``pi`` without the round trip through ``exp``"""
        return self._log_pi

    @property
    def weights_used(self) -> RewardWeights:
        """Weights this policy has been computed for"""
        return self._weights_used

    @property
    def iterations(self) -> int:
        """Number of soft backups performed"""
        return len(self._residuals)

    @property
    def residual(self) -> float:
        """Sup-norm change of ``V`` at the last backup"""
        return self._residuals[-1]

    @property
    def residuals(self) -> tuple[float, ...]:
        """Sup-norm change of ``V`` at every backup"""
        return self._residuals

    @property
    def converged(self) -> bool:
        """``True`` if the last residual is below the tolerance"""
        return self.residual < self._tol


def soft_backup_q(mdp: Mdp, w: "RewardWeights | np.ndarray", v: np.ndarray) -> np.ndarray:
    """``Q(s, a) = <w, phi(s, a)> + gamma * sum_s' T(s'|s, a) V(s')``"""
    v = np.asarray(v, dtype=float)
    if v.shape != (mdp.n_states,):
        raise IrlException(
            f"value vector must have shape ({mdp.n_states},), got {v.shape}",
            IrlError.DIMENSION_MISMATCH,
        )
    if not np.all(np.isfinite(v)):
        raise IrlException("value vector must be finite", IrlError.NON_FINITE)
    return mdp.reward_matrix(w) + mdp.gamma * (mdp.transition @ v)


def soft_backup(mdp: Mdp, w: "RewardWeights | np.ndarray", v: np.ndarray) -> np.ndarray:
    """Apply the soft optimal Bellman operator ``B_w`` to ``v``

    ``B_w(V)(s) = log sum_a exp(<w, phi(s, a)> + gamma * sum_s' T(s'|s, a) V(s'))``, the
    log-sum-exp subtracts the row maximum.

    Parameters
    ----------
    mdp : Mdp
        Environment
    w : RewardWeights | np.ndarray
        Reward weights
    v : np.ndarray
        Finite value vector of length ``n_states``

    Returns
    -------
    np.ndarray
        ``B_w(v)``

    Raises
    ------
    IrlException
        If ``v`` has the wrong length or is not finite
    """
    return logsumexp(soft_backup_q(mdp, w, v), axis=1)


def soft_value_iteration(
    mdp: Mdp,
    w: "RewardWeights | np.ndarray",
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SoftPolicy:
    """Iterate ``V <- B_w(V)`` from ``V = 0`` until the sup-norm change is below ``tol``

    Backups are synchronous. Reaching ``max_iter`` is not an error: the returned policy has
    ``converged`` set to ``False`` and the caller decides.

    Parameters
    ----------
    mdp : Mdp
        Environment
    w : RewardWeights | np.ndarray
        Reward weights
    tol : float, optional
        Convergence tolerance, by default 1e-8
    max_iter : int, optional
        Maximum number of backups, by default 10000

    Returns
    -------
    SoftPolicy
        Final ``Q``, ``V`` and ``pi``
    """
    if tol <= 0:
        raise IrlException(f"tol must be > 0, got {tol}", IrlError.INVALID_ARGUMENT)
    if max_iter < 1:
        raise IrlException(f"max_iter must be >= 1, got {max_iter}", IrlError.INVALID_ARGUMENT)
    if not isinstance(w, RewardWeights):
        w = RewardWeights(w)

    rewards = mdp.reward_matrix(w)
    v = np.zeros(mdp.n_states)
    residuals: list[float] = []
    for _ in range(max_iter):
        v_next = logsumexp(rewards + mdp.gamma * (mdp.transition @ v), axis=1)
        residuals.append(float(np.max(np.abs(v_next - v))))
        v = v_next
        if residuals[-1] < tol:
            break

    q = rewards + mdp.gamma * (mdp.transition @ v)
    v = logsumexp(q, axis=1)
    policy = SoftPolicy(q, v, w, residuals, tol)
    if policy.converged:
        logger.debug("soft value iteration converged in %d iterations", policy.iterations)
    else:
        logger.warning(
            "soft value iteration did not converge: residual %.3g after %d iterations",
            policy.residual,
            policy.iterations,
        )
    return policy

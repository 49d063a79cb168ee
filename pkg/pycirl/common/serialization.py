"""Read and write an ``Mdp`` and a ``DemoPool`` as a JSON document

The document keys are ``n_states``, ``n_actions``, ``feature_dim``, ``gamma``, ``p0``,
``transition`` (flat row-major ``[s, a, s']``), ``features`` (flat row-major ``[s, a, k]``) and
``demos`` (list of lists of ``[state, action]`` pairs).
"""

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np

from .errors import IrlError, IrlException
from .mdp import DemoPool, Mdp, Trajectory

__all__ = []

logger = logging.getLogger(__name__)

MDP_KEYS = ("n_states", "n_actions", "feature_dim", "gamma", "p0", "transition", "features")


def dump_mdp(mdp: Mdp) -> dict[str, Any]:
    """Convert an ``Mdp`` to a JSON compatible dictionary"""
    return {
        "n_states": mdp.n_states,
        "n_actions": mdp.n_actions,
        "feature_dim": mdp.feature_dim,
        "gamma": mdp.gamma,
        "p0": mdp.p0.tolist(),
        "transition": mdp.transition.ravel().tolist(),
        "features": mdp.features.ravel().tolist(),
    }


def load_mdp(document: dict[str, Any]) -> Mdp:
    """Build an ``Mdp`` from a dictionary produced by ``dump_mdp``

    Raises
    ------
    IrlException
        If a key is missing or the flat lists do not match the declared sizes
    """
    missing = [key for key in MDP_KEYS if key not in document]
    if missing:
        raise IrlException(f"missing MDP keys: {', '.join(missing)}", IrlError.INVALID_ARGUMENT)
    n_states = int(document["n_states"])
    n_actions = int(document["n_actions"])
    feature_dim = int(document["feature_dim"])
    try:
        transition = np.asarray(document["transition"], dtype=float).reshape(
            n_states, n_actions, n_states
        )
        features = np.asarray(document["features"], dtype=float).reshape(
            n_states, n_actions, feature_dim
        )
    except ValueError as exc:
        raise IrlException(str(exc), IrlError.DIMENSION_MISMATCH) from exc
    return Mdp(transition, float(document["gamma"]), document["p0"], features)


def dump_pool(pool: DemoPool) -> list[list[list[int]]]:
    """Convert a ``DemoPool`` to nested lists of ``[state, action]`` pairs"""
    return [[[s, a] for s, a in demo] for demo in pool]


def load_pool(demos: list) -> DemoPool:
    """Build a ``DemoPool`` from the output of ``dump_pool``"""
    return DemoPool(Trajectory((s, a) for s, a in demo) for demo in demos)


def save_environment_document(
    path: "str | Path", mdp: Mdp, pool: "DemoPool | None" = None, **extra: Any
):
    """Write the MDP, optionally a pool and extra entries (labels, expert weights...) to ``path``

    Raises
    ------
    IrlException
        If the file can not be written
    """
    document = dump_mdp(mdp)
    if pool is not None:
        document["demos"] = dump_pool(pool)
    document.update(extra)
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(document, indent=1), encoding="utf-8")
    except OSError as exc:
        raise IrlException(f"unable to write '{path}': {exc}", IrlError.IO_FAILURE) from exc
    logger.info("environment document written to %s", path)


def load_environment_document(path: "str | Path") -> tuple[Mdp, "DemoPool | None", dict]:
    """Read a document written by ``save_environment_document``

    Returns
    -------
    tuple[Mdp, DemoPool | None, dict]
        The MDP, the pool if the document has one, and the remaining entries
    """
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise IrlException(f"unable to read '{path}': {exc}", IrlError.IO_FAILURE) from exc
    mdp = load_mdp(document)
    pool = load_pool(document["demos"]) if "demos" in document else None
    extra = {k: v for k, v in document.items() if k not in MDP_KEYS and k != "demos"}
    return mdp, pool, extra

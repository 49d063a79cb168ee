"""Error metrics of a learner policy against the expert"""

import numpy as np

from ..common import IrlError, IrlException, Mdp, Metric, RewardWeights
from ..learner.feature_expectations import FeatureExpectation, MuEstimator, mu_policy_exact
from ..learner.maxent import MetricCallback
from ..learner.soft_vi import SoftPolicy
from ..teacher.expert import ExpertPolicy

__all__ = []


def metric_feature_mismatch(
    mdp: Mdp,
    learner_policy: SoftPolicy,
    reference_mu: "FeatureExpectation | np.ndarray",
    mu_mode: "MuEstimator | None" = None,
    rng: "np.random.Generator | None" = None,
) -> float:
    """Feature expectation mismatch ``||mu_learner - reference_mu||_2``

    ``mu_learner`` is computed with ``mu_mode``, exact by default.

    Raises
    ------
    IrlException
        If the reference does not have the feature dimension
    """
    reference = reference_mu.mu if isinstance(reference_mu, FeatureExpectation) else reference_mu
    reference = np.asarray(reference, dtype=float)
    if reference.shape != (mdp.feature_dim,):
        raise IrlException(
            f"reference mu has shape {reference.shape}, expected ({mdp.feature_dim},)",
            IrlError.DIMENSION_MISMATCH,
        )
    estimator = MuEstimator() if mu_mode is None else mu_mode
    mu_learner = estimator.estimate(mdp, learner_policy.pi, rng).mu
    return float(np.linalg.norm(mu_learner - reference))


def metric_reward_gap(
    mdp: Mdp,
    learner_policy: SoftPolicy,
    expert_policy: "ExpertPolicy | SoftPolicy | np.ndarray",
    w_star: "RewardWeights | np.ndarray",
) -> float:
    """Expected discounted reward gap ``<w*, mu_expert> - <w*, mu_learner>``

    Both feature expectations are exact.
    """
    w = w_star.w if isinstance(w_star, RewardWeights) else np.asarray(w_star, dtype=float)
    if isinstance(expert_policy, ExpertPolicy):
        expert_pi = expert_policy.matrix(mdp.n_actions)
    elif isinstance(expert_policy, SoftPolicy):
        expert_pi = expert_policy.pi
    else:
        expert_pi = expert_policy
    value_expert = w @ mu_policy_exact(mdp, expert_pi).mu
    value_learner = w @ mu_policy_exact(mdp, learner_policy.pi).mu
    return float(value_expert - value_learner)


def metric_callbacks(
    metrics: "tuple[Metric, ...] | list[Metric]",
    reference_mu: FeatureExpectation,
    expert: ExpertPolicy,
    w_star: RewardWeights,
    mu_mode: "MuEstimator | None" = None,
    rng: "np.random.Generator | None" = None,
) -> dict[Metric, MetricCallback]:
    """Callbacks evaluating ``metrics`` on the learner policy after every training step"""
    builders = {
        Metric.FEATURE_MISMATCH: lambda mdp, policy: metric_feature_mismatch(
            mdp, policy, reference_mu, mu_mode, rng
        ),
        Metric.REWARD_GAP: lambda mdp, policy: metric_reward_gap(mdp, policy, expert, w_star),
    }
    return {metric: builders[metric] for metric in metrics}

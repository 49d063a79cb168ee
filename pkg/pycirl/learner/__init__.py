"""Learner API

This module contains the MaxEnt IRL learner: soft value iteration, feature expectations, the
online gradient ascent learner and the self-paced learner.
"""

from .feature_expectations import (
    FeatureExpectation,
    MuEstimator,
    default_mc_horizon,
    mu_demo_set,
    mu_policy_exact,
    mu_policy_mc,
    mu_trajectory,
    state_occupancy,
)
from .maxent import (
    ConstantSchedule,
    LearnerState,
    gradient,
    inverse_time,
    log_likelihood,
    train,
    train_step,
    trajectory_loss,
)
from .record import RunRecord, StepRecord
from .self_paced import (
    GrowthTrigger,
    LossForm,
    SpirlConfig,
    batch_train,
    select_demos,
    spirl_train,
    update_lambda,
)
from .soft_vi import SoftPolicy, soft_backup, soft_backup_q, soft_value_iteration

__all__ = [
    # feature_expectations
    "FeatureExpectation",
    "MuEstimator",
    "default_mc_horizon",
    "mu_demo_set",
    "mu_policy_exact",
    "mu_policy_mc",
    "mu_trajectory",
    "state_occupancy",
    # maxent
    "ConstantSchedule",
    "LearnerState",
    "gradient",
    "inverse_time",
    "log_likelihood",
    "train",
    "train_step",
    "trajectory_loss",
    # record
    "RunRecord",
    "StepRecord",
    # self_paced
    "GrowthTrigger",
    "LossForm",
    "SpirlConfig",
    "batch_train",
    "select_demos",
    "spirl_train",
    "update_lambda",
    # soft_vi
    "SoftPolicy",
    "soft_backup",
    "soft_backup_q",
    "soft_value_iteration",
]

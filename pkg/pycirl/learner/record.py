"""Per-step metric trace of one training run"""

from dataclasses import dataclass, field

import numpy as np

from ..helper import weights_digest

__all__ = []


@dataclass(frozen=True)
class StepRecord:
    """Metrics recorded after one training step"""

    step: int
    feature_mismatch: "float | None" = None
    reward_gap: "float | None" = None
    selected_count: "int | None" = None
    """Number of demonstrations selected by the self-paced learner"""
    lambda_: "float | None" = None
    """Self-paced threshold after the step"""
    converged: bool = True
    """Whether soft value iteration converged for the policy used by the update"""


@dataclass
class RunRecord:
    """Trace of one seeded training run, one ``StepRecord`` per step"""

    seed: "int | None" = None
    steps: list[StepRecord] = field(default_factory=list)
    final_weights: "np.ndarray | None" = None

    def append(self, step: StepRecord):
        self.steps.append(step)

    @property
    def n_non_converged(self) -> int:
        """Number of steps whose policy did not converge"""
        return sum(1 for step in self.steps if not step.converged)

    @property
    def final_weights_digest(self) -> str:
        if self.final_weights is None:
            return ""
        return weights_digest(self.final_weights)

    def column(self, name: str) -> list:
        """Values of one ``StepRecord`` field, in step order"""
        return [getattr(step, name) for step in self.steps]

    def __len__(self) -> int:
        return len(self.steps)

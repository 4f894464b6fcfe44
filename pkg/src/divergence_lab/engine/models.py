"""Result types of the inference pipeline."""

from dataclasses import dataclass, field

from divergence_lab.core.models import LatentState


@dataclass(frozen=True)
class InferenceOutcome:
    """One agent's conclusion on one observation.

    Attributes:
        posterior: Tempered posterior.
        conclusion: Lexicographically smallest action with maximal value.
        action_values: Discounted expected utility per action.
        entropy: Hypothesis entropy (nats) of the tempered posterior.
        weights: Reference weights used for the observation's grounds.
    """

    posterior: LatentState
    conclusion: str
    action_values: dict[str, float] = field(default_factory=dict)
    entropy: float = 0.0
    weights: tuple[float, ...] = ()

    @property
    def actions(self) -> tuple[str, ...]:
        return tuple(self.action_values)


@dataclass(frozen=True)
class DivergenceReport:
    """How far two outcomes on the same observation are apart."""

    conclusions_differ: bool
    posterior_tv: float
    value_gap: float

    @classmethod
    def identical(cls) -> "DivergenceReport":
        return cls(conclusions_differ=False, posterior_tv=0.0, value_gap=0.0)

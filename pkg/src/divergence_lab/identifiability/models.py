"""Result types for alignment, discriminative design and attribution."""

from dataclasses import dataclass, field
from enum import Enum

from divergence_lab.engine.models import DivergenceReport, InferenceOutcome
from divergence_lab.profile.models import Component, InferenceProfile


@dataclass(frozen=True)
class AlignmentResult:
    """Residual divergence after copying components of θ_A into θ_B."""

    synchronized_components: tuple[Component, ...]
    outcome_a: InferenceOutcome
    outcome_b: InferenceOutcome
    residual: DivergenceReport
    aligned_profile: InferenceProfile

    @property
    def label(self) -> str:
        return ",".join(c.value for c in self.synchronized_components)


@dataclass(frozen=True)
class CandidateScore:
    """Score of one candidate observation or intervention."""

    candidate: str
    score: float
    # None when no conclusion-level check was requested
    conclusions_differ: bool | None = None


@dataclass(frozen=True)
class DiscriminationResult:
    """Exhaustively ranked candidates; the head is the best one."""

    mode: str
    delta: float
    ranking: tuple[CandidateScore, ...] = field(default_factory=tuple)

    @property
    def best_candidate(self) -> str:
        return self.ranking[0].candidate

    @property
    def score(self) -> float:
        return self.ranking[0].score

    @property
    def passes(self) -> bool:
        return self.score > self.delta


class Attribution(str, Enum):
    """Where a conclusion split comes from."""

    THETA_LEVEL = "theta_level"
    W_LEVEL = "w_level"
    BOTH = "both"
    NONE = "none"


@dataclass(frozen=True)
class AttributionCell:
    """Conclusion reached with one agent's model and one agent's profile."""

    model_of: str
    profile_of: str
    conclusion: str


@dataclass(frozen=True)
class AttributionReport:
    attribution: Attribution
    theta_effect: bool
    w_effect: bool
    cells: tuple[AttributionCell, ...]


class Basis(str, Enum):
    """The three recurrent axes the profile components project onto."""

    EXTERNALIZATION = "externalization"
    ORDER = "order"
    ABSTRACTION = "abstraction"


@dataclass(frozen=True)
class Remedy:
    """One basis-level adjustment and the divergence left after applying it."""

    basis: Basis
    action: str
    residual: DivergenceReport

    @property
    def resolves(self) -> bool:
        return not self.residual.conclusions_differ


@dataclass(frozen=True)
class RemedyPlan:
    baseline: DivergenceReport
    remedies: tuple[Remedy, ...]

    @property
    def best(self) -> Remedy:
        return self.remedies[0]

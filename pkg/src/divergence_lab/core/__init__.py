"""World-model core - hypotheses, evidence, posteriors and predictives."""

from divergence_lab.core.models import (
    Ground,
    Hypothesis,
    HypothesisSpace,
    LatentState,
    Observation,
    WorldModel,
)
from divergence_lab.core.world import (
    emission_prob,
    predictive_distribution,
    predictive_vector,
    weighted_posterior,
)

__all__ = [
    # Models
    "Ground",
    "Hypothesis",
    "HypothesisSpace",
    "LatentState",
    "Observation",
    "WorldModel",
    # Queries
    "emission_prob",
    "predictive_distribution",
    "predictive_vector",
    "weighted_posterior",
]

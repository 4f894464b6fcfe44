"""Identifiability procedures - alignment, discriminative design, attribution."""

from divergence_lab.identifiability.alignment import (
    align_profiles,
    component_subsets,
    sweep_alignment,
)
from divergence_lab.identifiability.attribution import attribute_divergence
from divergence_lab.identifiability.design import (
    ConclusionProbe,
    count_vectors,
    design_intervention,
    design_observation,
    forecast_counts,
)
from divergence_lab.identifiability.models import (
    AlignmentResult,
    Attribution,
    AttributionCell,
    AttributionReport,
    Basis,
    CandidateScore,
    DiscriminationResult,
    Remedy,
    RemedyPlan,
)
from divergence_lab.identifiability.remedies import externalize, recommend_remedies

__all__ = [
    # Alignment
    "align_profiles",
    "component_subsets",
    "sweep_alignment",
    # Discriminative design
    "ConclusionProbe",
    "count_vectors",
    "design_intervention",
    "design_observation",
    "forecast_counts",
    # Attribution and remedies
    "attribute_divergence",
    "externalize",
    "recommend_remedies",
    # Results
    "AlignmentResult",
    "Attribution",
    "AttributionCell",
    "AttributionReport",
    "Basis",
    "CandidateScore",
    "DiscriminationResult",
    "Remedy",
    "RemedyPlan",
]

"""Inference profile θ = (R, E, S, D) and its operators."""

from divergence_lab.profile.models import (
    COMPONENT_FIELDS,
    COMPONENT_ORDER,
    BasisCoordinates,
    Component,
    GateDecision,
    InferenceProfile,
    TraceStats,
    ordered_components,
)
from divergence_lab.profile.operators import (
    discount_factors,
    discounted_value,
    externalizability_score,
    externalizability_scores,
    hypothesis_entropy,
    normalized_entropy,
    project_to_bases,
    reference_weights,
    stabilization_gate,
    temper,
)

__all__ = [
    # Models
    "BasisCoordinates",
    "COMPONENT_FIELDS",
    "COMPONENT_ORDER",
    "Component",
    "GateDecision",
    "InferenceProfile",
    "TraceStats",
    "ordered_components",
    # Operators
    "discount_factors",
    "discounted_value",
    "externalizability_score",
    "externalizability_scores",
    "hypothesis_entropy",
    "normalized_entropy",
    "project_to_bases",
    "reference_weights",
    "stabilization_gate",
    "temper",
]

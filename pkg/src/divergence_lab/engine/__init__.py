"""Inference engine - composes the profile operators with a world model."""

from divergence_lab.engine.models import DivergenceReport, InferenceOutcome
from divergence_lab.engine.pipeline import (
    action_values,
    choose_conclusion,
    compare,
    compare_all,
    infer,
    total_variation,
)

__all__ = [
    "DivergenceReport",
    "InferenceOutcome",
    "action_values",
    "choose_conclusion",
    "compare",
    "compare_all",
    "infer",
    "total_variation",
]

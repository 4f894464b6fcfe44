"""Inference pipeline y = Infer(W, o; θ) and conclusion comparison."""

from collections.abc import Mapping, Sequence
from itertools import combinations

import numpy as np

from divergence_lab.core.models import LatentState, Observation, WorldModel
from divergence_lab.core.world import weighted_posterior
from divergence_lab.engine.models import DivergenceReport, InferenceOutcome
from divergence_lab.errors import ContractError
from divergence_lab.profile.models import InferenceProfile
from divergence_lab.profile.operators import (
    hypothesis_entropy,
    reference_weights,
    temper,
)


def total_variation(p: Sequence[float] | np.ndarray, q: Sequence[float] | np.ndarray) -> float:
    """½ Σ |p - q|."""
    a = np.asarray(p, dtype=float)
    b = np.asarray(q, dtype=float)
    if a.shape != b.shape:
        raise ContractError(f"distributions have shapes {a.shape} and {b.shape}")
    return float(0.5 * np.abs(a - b).sum())


def action_values(model: WorldModel, posterior: np.ndarray, gamma: float) -> dict[str, float]:
    """Discounted expected utility of every action under ``posterior``."""
    space = model.space
    values = posterior @ space.value_matrix(gamma)
    return {a: float(v) for a, v in zip(space.actions, values)}


def choose_conclusion(values: Mapping[str, float]) -> str:
    """Argmax with ties going to the lexicographically smallest action id."""
    best_action = None
    best_value = -np.inf
    for action in sorted(values):
        if values[action] > best_value:
            best_action, best_value = action, values[action]
    if best_action is None:
        raise ContractError("no action values to choose from")
    return best_action


def infer(model: WorldModel, obs: Observation, profile: InferenceProfile) -> InferenceOutcome:
    """Run the fixed pipeline.

    1. reference weights over the observation's grounds
    2. weighted posterior
    3. tempering with T_E
    4. discounted expected utility per action
    5. argmax, lexicographic tie-break

    Args:
        model: The agent's world model.
        obs: Observation to reason about.
        profile: The agent's inference profile.

    Returns:
        InferenceOutcome, deterministic in its inputs.
    """
    weights = reference_weights(obs.grounds, profile)
    raw = weighted_posterior(model, obs, weights)
    tempered = temper(raw.as_array(), profile.temperature, check=False)
    values = action_values(model, tempered, profile.gamma)

    return InferenceOutcome(
        posterior=LatentState(
            hypotheses=raw.hypotheses,
            posterior=tuple(float(p) for p in tempered),
            step=obs.step,
        ),
        conclusion=choose_conclusion(values),
        action_values=values,
        entropy=hypothesis_entropy(tempered, check=False),
        weights=tuple(float(w) for w in weights),
    )


def compare(outcome_a: InferenceOutcome, outcome_b: InferenceOutcome) -> DivergenceReport:
    """Conclusion split, posterior TV distance and largest action-value gap."""
    if outcome_a.posterior.hypotheses != outcome_b.posterior.hypotheses:
        raise ContractError("outcomes range over different hypotheses")
    if set(outcome_a.action_values) != set(outcome_b.action_values):
        raise ContractError("outcomes range over different actions")

    gap = max(
        abs(outcome_a.action_values[a] - outcome_b.action_values[a])
        for a in outcome_a.action_values
    )
    return DivergenceReport(
        conclusions_differ=outcome_a.conclusion != outcome_b.conclusion,
        posterior_tv=total_variation(outcome_a.posterior.posterior, outcome_b.posterior.posterior),
        value_gap=float(gap),
    )


def compare_all(
    outcomes: Mapping[str, InferenceOutcome],
) -> dict[tuple[str, str], DivergenceReport]:
    """Pairwise reports for every agent pair, in declaration order."""
    return {
        (a, b): compare(outcomes[a], outcomes[b])
        for a, b in combinations(list(outcomes), 2)
    }

"""Discriminative observation and intervention design.

Both procedures score every candidate exhaustively and rank them by score,
ties broken by candidate id, in the same spirit as a retrieval ranking.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np
from scipy.stats import multinomial

from divergence_lab.core.models import LatentState, WorldModel
from divergence_lab.core.world import predictive_vector
from divergence_lab.engine.pipeline import infer, total_variation
from divergence_lab.errors import ContractError
from divergence_lab.identifiability.alignment import check_same_scenario
from divergence_lab.identifiability.models import CandidateScore, DiscriminationResult
from divergence_lab.learning.agent import Agent
from divergence_lab.learning.environment import Environment
from divergence_lab.profile.models import InferenceProfile

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConclusionProbe:
    """Checks whether a single candidate ground splits the two conclusions."""

    profile_a: InferenceProfile
    profile_b: InferenceProfile
    env: Environment

    def differs(self, model_a: WorldModel, model_b: WorldModel, symbol: str) -> bool:
        obs = self.env.observation([symbol])
        return (
            infer(model_a, obs, self.profile_a).conclusion
            != infer(model_b, obs, self.profile_b).conclusion
        )


def _rank(mode: str, delta: float, scores: list[CandidateScore]) -> DiscriminationResult:
    ranking = tuple(sorted(scores, key=lambda c: (-c.score, c.candidate)))
    for c in ranking:
        logger.debug("%s candidate %s scored %.6g", mode, c.candidate, c.score)
    return DiscriminationResult(mode=mode, delta=delta, ranking=ranking)


def design_observation(
    model_a: WorldModel,
    state_a: LatentState,
    model_b: WorldModel,
    state_b: LatentState,
    candidates: Sequence[str],
    delta: float,
    probe: ConclusionProbe | None = None,
) -> DiscriminationResult:
    """Rank candidate symbols by |p_A(s) - p_B(s)| under each model's predictive.

    Args:
        model_a, state_a: First world model and its latent state.
        model_b, state_b: Second world model and its latent state.
        candidates: Symbols that could be observed next.
        delta: Pass threshold; a result passes when its best score > delta.
        probe: Optional conclusion-level check reported per candidate.
    """
    if not candidates:
        raise ContractError("design_observation needs at least one candidate")
    if delta < 0:
        raise ContractError(f"delta must be >= 0, got {delta}")

    pred_a = predictive_vector(model_a, state_a)
    pred_b = predictive_vector(model_b, state_b)
    scores = []
    for symbol in candidates:
        j = model_a.symbol_index(symbol)
        gap = abs(float(pred_a[j]) - float(pred_b[model_b.symbol_index(symbol)]))
        differs = probe.differs(model_a, model_b, symbol) if probe is not None else None
        scores.append(CandidateScore(candidate=symbol, score=gap, conclusions_differ=differs))
    return _rank("observation", delta, scores)


def count_vectors(n_symbols: int, horizon: int) -> np.ndarray:
    """Every way of distributing ``horizon`` draws over ``n_symbols`` symbols."""
    return np.array(
        [
            np.bincount(draw, minlength=n_symbols)
            for draw in combinations_with_replacement(range(n_symbols), horizon)
        ],
        dtype=int,
    )


def forecast_weights(agent: Agent, realized: str | None) -> np.ndarray:
    """Mixture weights an agent uses to forecast a forced regime.

    If the regime realizes one of the agent's hypotheses the forecast commits
    to it; otherwise the agent keeps its current belief.
    """
    hypotheses = agent.model.hypotheses
    if realized is not None and realized in hypotheses:
        weights = np.zeros(len(hypotheses))
        weights[hypotheses.index(realized)] = 1.0
        return weights
    return agent.current_belief()


def forecast_counts(agent: Agent, realized: str | None, counts: np.ndarray) -> np.ndarray:
    """Probability of each count vector of the next ``m`` symbols."""
    horizon = int(counts[0].sum())
    emission = agent.model.emission_matrix()
    weights = forecast_weights(agent, realized)
    forecast = np.zeros(len(counts))
    for w, row in zip(weights, emission):
        if w > 0:
            forecast += w * multinomial.pmf(counts, n=horizon, p=row)
    return forecast


def design_intervention(
    env: Environment,
    agents: tuple[Agent, Agent],
    interventions: Sequence[str],
    horizon: int,
    delta: float,
) -> DiscriminationResult:
    """Rank interventions by how differently the two agents forecast do(a).

    The score is the TV distance between the agents' forecast distributions of
    the symbol counts over the next ``horizon`` draws. Forecasts are analytic
    mixtures, so no sampling is involved.
    """
    if not interventions:
        raise ContractError("design_intervention needs at least one intervention")
    if horizon < 1:
        raise ContractError(f"horizon must be >= 1, got {horizon}")
    if delta < 0:
        raise ContractError(f"delta must be >= 0, got {delta}")
    agent_a, agent_b = agents
    check_same_scenario(agent_a, agent_b)

    counts = count_vectors(len(agent_a.model.symbols), horizon)
    scores = []
    for intervention_id in interventions:
        forced = env.forced(intervention_id)
        realized = forced.regime().realizes
        score = total_variation(
            forecast_counts(agent_a, realized, counts),
            forecast_counts(agent_b, realized, counts),
        )
        scores.append(CandidateScore(candidate=intervention_id, score=score))
    return _rank("intervention", delta, scores)

"""Agents: a world model paired with an inference profile.

The W-level loop lives here:
- expose():       profile-biased subsampling of the shared bundle, P(o | θ)
- update_model(): gated soft-count update φ_{t+1} = U(φ_t, o_t, θ)
"""

from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from divergence_lab.core.models import LatentState, Observation, WorldModel
from divergence_lab.engine.models import InferenceOutcome
from divergence_lab.engine.pipeline import total_variation
from divergence_lab.errors import ContractError
from divergence_lab.profile.models import GateDecision, InferenceProfile
from divergence_lab.profile.operators import reference_weights, stabilization_gate, temper


@dataclass(frozen=True)
class UpdateRecord:
    """One gate evaluation: (step, Δη, decision)."""

    step: int
    delta_eta: float
    decision: GateDecision


class Agent(BaseModel):
    """World model + inference profile + update history.

    ``belief`` is the last tempered posterior that passed the gate; before the
    first accepted update it is the tempered prior.
    """

    model_config = ConfigDict(frozen=True)

    id: str = Field(min_length=1)
    label: str = ""
    model: WorldModel
    profile: InferenceProfile
    exposure_k: int = Field(default=1, ge=1)
    stream: str | None = None
    belief: tuple[float, ...] | None = None
    update_log: tuple[UpdateRecord, ...] = ()

    @property
    def stream_label(self) -> str:
        return self.stream or self.id

    def current_belief(self) -> np.ndarray:
        if self.belief is not None:
            return np.asarray(self.belief, dtype=float)
        return temper(np.asarray(self.model.prior, dtype=float), self.profile.temperature)

    def belief_state(self) -> LatentState:
        return LatentState(
            hypotheses=self.model.hypotheses,
            posterior=tuple(float(p) for p in self.current_belief()),
        )

    @property
    def hold_count(self) -> int:
        return sum(1 for r in self.update_log if r.decision is GateDecision.HOLD)

    def __str__(self) -> str:
        return f"Agent({self.id}, {len(self.update_log)} updates logged)"


def sample_exposure(
    bundle: Observation,
    weights: np.ndarray,
    k: int,
    rng: np.random.Generator,
) -> Observation:
    """Sequential weighted sampling of ``k`` grounds without replacement.

    Selected grounds keep their original order.
    """
    n = len(bundle.grounds)
    if not 1 <= k <= n:
        raise ContractError(f"exposure size k={k} outside [1, {n}]")
    if k == n:
        return bundle

    available = np.ones(n, dtype=bool)
    for _ in range(k):
        masked = np.where(available, weights, 0.0)
        if masked.sum() <= 0.0:
            # every remaining weight underflowed; fall back to uniform
            masked = available.astype(float)
        cumulative = np.cumsum(masked)
        idx = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
        if idx >= n or not available[idx]:
            idx = int(np.flatnonzero(available)[-1])
        available[idx] = False

    chosen = np.flatnonzero(~available)
    return Observation(step=bundle.step, grounds=tuple(bundle.grounds[i] for i in chosen))


def expose(
    bundle: Observation,
    agent: Agent,
    k: int,
    rng: np.random.Generator,
    *,
    weights: np.ndarray | None = None,
) -> Observation:
    """The sub-bundle an agent actually attends to.

    Inclusion probability follows the agent's reference weights over the full
    bundle, renormalised after each draw.

    Args:
        bundle: Shared bundle emitted by the environment.
        agent: Agent whose profile biases the selection.
        k: Number of grounds to keep, 1 <= k <= len(bundle).
        rng: The agent's random stream.
        weights: The agent's reference weights over ``bundle`` when the caller
            already has them; computed from the profile otherwise.
    """
    if weights is None:
        weights = reference_weights(bundle.grounds, agent.profile)
    elif len(weights) != len(bundle.grounds):
        raise ContractError(f"{len(weights)} weights for {len(bundle.grounds)} grounds")
    return sample_exposure(bundle, weights, k, rng)


def update_model(
    agent: Agent,
    exposed: Observation,
    outcome: InferenceOutcome,
    prev_posterior: np.ndarray | tuple[float, ...] | None = None,
) -> Agent:
    """Gated soft-count update.

    Δη is the TV distance between ``prev_posterior`` (default: the agent's
    belief) and the outcome's tempered posterior. When the gate opens, every
    exposed ground with symbol s adds posterior(h) to count[h][s], and the
    posterior becomes the new belief. The decision is appended to the log
    either way.

    Returns:
        A new Agent; the input is not modified.
    """
    model = agent.model
    posterior = outcome.posterior.as_array()
    prev = agent.current_belief() if prev_posterior is None else np.asarray(prev_posterior, float)

    delta_eta = total_variation(prev, posterior)
    decision = stabilization_gate(delta_eta, agent.profile.tau)
    record = UpdateRecord(step=outcome.posterior.step, delta_eta=delta_eta, decision=decision)

    update: dict = {"update_log": agent.update_log + (record,)}
    if decision is GateDecision.UPDATE:
        symbol_counts = np.zeros(len(model.symbols))
        for symbol in exposed.symbols:
            symbol_counts[model.symbol_index(symbol)] += 1.0
        counts = np.asarray(model.emission_counts, dtype=float) + np.outer(posterior, symbol_counts)
        update["model"] = model.with_counts(counts)
        update["belief"] = tuple(float(p) for p in posterior)

    return agent.model_copy(update=update)


def model_distance(model_a: WorldModel, model_b: WorldModel) -> float:
    """Σ_{h,s} |p_A(s|h) - p_B(s|h)| on smoothed emission probabilities."""
    if model_a.hypotheses != model_b.hypotheses or model_a.symbols != model_b.symbols:
        raise ContractError("models range over different hypotheses or symbols")
    return float(np.abs(model_a.emission_matrix() - model_b.emission_matrix()).sum())

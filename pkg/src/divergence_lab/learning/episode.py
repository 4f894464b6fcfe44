"""Episode runner: shared bundles, biased exposure, inference and gated updates."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from divergence_lab.core.models import Observation, WorldModel
from divergence_lab.engine.models import InferenceOutcome
from divergence_lab.engine.pipeline import infer
from divergence_lab.errors import ContractError, UnknownIdentifierError
from divergence_lab.learning.agent import Agent, UpdateRecord, expose, update_model
from divergence_lab.learning.environment import Environment, emit_bundle
from divergence_lab.learning.rng import ENVIRONMENT_STREAM, derive_rng
from divergence_lab.profile.models import GateDecision, TraceStats
from divergence_lab.profile.operators import (
    externalizability_scores,
    normalized_entropy,
    reference_weights,
)

logger = logging.getLogger(__name__)

_PROGRESS_EVERY = 500


class EpisodeSource(Protocol):
    """Anything that can set up an episode (a loaded Scenario, for instance)."""

    def build_environment(self) -> Environment:
        ...

    def build_agents(self) -> list[Agent]:
        ...


@dataclass(frozen=True)
class StepRecord:
    """Everything that happened at one step."""

    step: int
    bundle: Observation
    exposures: dict[str, Observation] = field(default_factory=dict)
    outcomes: dict[str, InferenceOutcome] = field(default_factory=dict)
    updates: dict[str, UpdateRecord] = field(default_factory=dict)
    # Σ_i w_i x_i over the full bundle, per agent
    externalization: dict[str, float] = field(default_factory=dict)
    # models after this step's update
    models: dict[str, WorldModel] = field(default_factory=dict)


@dataclass(frozen=True)
class SimulationTrace:
    """Replayable record of one episode."""

    seed: int
    steps: tuple[StepRecord, ...]
    initial_agents: tuple[Agent, ...]
    final_agents: tuple[Agent, ...]

    @property
    def agent_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.final_agents)

    def agent(self, agent_id: str) -> Agent:
        for a in self.final_agents:
            if a.id == agent_id:
                return a
        raise UnknownIdentifierError("agent", agent_id)

    def initial_agent(self, agent_id: str) -> Agent:
        for a in self.initial_agents:
            if a.id == agent_id:
                return a
        raise UnknownIdentifierError("agent", agent_id)

    @property
    def final_models(self) -> dict[str, WorldModel]:
        return {a.id: a.model for a in self.final_agents}


def _check_agents(env: Environment, agents: Sequence[Agent]) -> None:
    if not agents:
        raise ContractError("an episode needs at least one agent")
    ids = [a.id for a in agents]
    if len(set(ids)) != len(ids):
        raise ContractError(f"agent ids must be unique, got {ids}")
    for agent in agents:
        if agent.model.symbols != env.symbols:
            raise ContractError(f"agent {agent.id!r} models a different symbol alphabet")
        if agent.stream_label == ENVIRONMENT_STREAM:
            raise ContractError(f"agent {agent.id!r} may not use the reserved stream label")
        if agent.exposure_k > env.bundle_size:
            raise ContractError(
                f"agent {agent.id!r} exposure k={agent.exposure_k} exceeds "
                f"bundle size {env.bundle_size}"
            )


def run_agents(
    env: Environment,
    agents: Sequence[Agent],
    steps: int,
    seed: int,
) -> SimulationTrace:
    """Run ``steps`` rounds of emit -> expose -> infer -> update.

    Each agent draws exposures from its own stream, so agents sharing a
    stream label see identical exposures whenever their weights agree.
    """
    if steps < 1:
        raise ContractError(f"steps must be >= 1, got {steps}")
    _check_agents(env, agents)

    env_rng = derive_rng(seed, ENVIRONMENT_STREAM)
    agent_rngs = {a.id: derive_rng(seed, a.stream_label) for a in agents}
    current = {a.id: a for a in agents}

    logger.info("Running %d steps with %d agents (seed=%d)", steps, len(agents), seed)
    records: list[StepRecord] = []
    for t in range(1, steps + 1):
        bundle = emit_bundle(env, env_rng, step=t)
        record = StepRecord(step=t, bundle=bundle)

        for agent_id, agent in current.items():
            weights = reference_weights(bundle.grounds, agent.profile)
            x = externalizability_scores(bundle.grounds, agent.profile.alpha)
            exposed = expose(
                bundle, agent, agent.exposure_k, agent_rngs[agent_id], weights=weights
            )
            outcome = infer(agent.model, exposed, agent.profile)
            agent = update_model(agent, exposed, outcome)

            current[agent_id] = agent
            record.exposures[agent_id] = exposed
            record.outcomes[agent_id] = outcome
            record.updates[agent_id] = agent.update_log[-1]
            record.externalization[agent_id] = float(np.dot(weights, x))
            record.models[agent_id] = agent.model

        records.append(record)
        if t % _PROGRESS_EVERY == 0:
            logger.debug("step %d/%d", t, steps)

    logger.info("Episode finished after %d steps", steps)
    return SimulationTrace(
        seed=seed,
        steps=tuple(records),
        initial_agents=tuple(agents),
        final_agents=tuple(current.values()),
    )


def run_episode(scenario: EpisodeSource, steps: int, seed: int) -> SimulationTrace:
    """Run an episode for a scenario; bit-identical for equal (scenario, steps, seed)."""
    return run_agents(scenario.build_environment(), scenario.build_agents(), steps, seed)


def trace_stats(trace: SimulationTrace, agent_id: str) -> TraceStats:
    """Per-agent statistics for the basis projection."""
    trace.agent(agent_id)
    n = len(trace.steps)
    externalization = sum(r.externalization[agent_id] for r in trace.steps) / n
    entropy = sum(
        normalized_entropy(r.outcomes[agent_id].posterior.posterior) for r in trace.steps
    ) / n
    holds = sum(1 for r in trace.steps if r.updates[agent_id].decision is GateDecision.HOLD)
    return TraceStats(
        mean_externalization=externalization,
        mean_entropy=entropy,
        hold_rate=holds / n,
    )

"""θ-alignment: synchronise profile components and measure what remains."""

from collections.abc import Iterable
from itertools import combinations

from divergence_lab.core.models import Observation
from divergence_lab.engine.pipeline import compare, infer
from divergence_lab.errors import ContractError
from divergence_lab.identifiability.models import AlignmentResult
from divergence_lab.learning.agent import Agent
from divergence_lab.profile.models import COMPONENT_ORDER, Component, ordered_components


def check_same_scenario(agent_a: Agent, agent_b: Agent) -> None:
    a, b = agent_a.model, agent_b.model
    if a.hypotheses != b.hypotheses or a.symbols != b.symbols:
        raise ContractError(
            f"agents {agent_a.id!r} and {agent_b.id!r} do not share hypotheses and symbols"
        )
    if a.space.actions != b.space.actions:
        raise ContractError(f"agents {agent_a.id!r} and {agent_b.id!r} do not share actions")


def align_profiles(
    agent_a: Agent,
    agent_b: Agent,
    obs: Observation,
    components: Iterable[Component | str],
) -> AlignmentResult:
    """Copy the named components of θ_A into θ_B and re-run inference.

    R copies (alpha, beta_r), E copies temperature, S copies tau, D copies
    gamma. Neither agent is modified.

    Args:
        agent_a: Agent whose settings are adopted.
        agent_b: Agent that adopts them.
        obs: Observation both agents reason about.
        components: Non-empty subset of {R, E, S, D}.
    """
    chosen = ordered_components(Component(c) for c in components)
    if not chosen:
        raise ContractError("component set must not be empty")
    check_same_scenario(agent_a, agent_b)

    aligned = agent_b.profile.with_components(agent_a.profile, chosen)
    outcome_a = infer(agent_a.model, obs, agent_a.profile)
    outcome_b = infer(agent_b.model, obs, aligned)
    return AlignmentResult(
        synchronized_components=chosen,
        outcome_a=outcome_a,
        outcome_b=outcome_b,
        residual=compare(outcome_a, outcome_b),
        aligned_profile=aligned,
    )


def component_subsets() -> list[tuple[Component, ...]]:
    """The 15 non-empty subsets, by size and then in R, E, S, D order."""
    return [
        subset
        for size in range(1, len(COMPONENT_ORDER) + 1)
        for subset in combinations(COMPONENT_ORDER, size)
    ]


def sweep_alignment(agent_a: Agent, agent_b: Agent, obs: Observation) -> list[AlignmentResult]:
    """align_profiles for every non-empty component subset."""
    return [align_profiles(agent_a, agent_b, obs, subset) for subset in component_subsets()]

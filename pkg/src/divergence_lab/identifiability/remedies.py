"""Basis-level remedies for a conclusion split.

- externalization: make the grounds mutually auditable (description cost 0)
- order:           align exploration and stabilization (E, S)
- abstraction:     align the evaluation horizon (D)
"""

from collections.abc import Iterable

from divergence_lab.core.models import Observation
from divergence_lab.engine.pipeline import compare, infer
from divergence_lab.identifiability.alignment import align_profiles, check_same_scenario
from divergence_lab.identifiability.models import Basis, Remedy, RemedyPlan
from divergence_lab.learning.agent import Agent
from divergence_lab.profile.models import Component

BASIS_COMPONENTS: dict[Basis, tuple[Component, ...]] = {
    Basis.ORDER: (Component.E, Component.S),
    Basis.ABSTRACTION: (Component.D,),
}


def externalize(
    obs: Observation,
    symbols: Iterable[str] | None = None,
    cost: float = 0.0,
) -> Observation:
    """Copy of ``obs`` whose grounds (all, or those with ``symbols``) cost ``cost``."""
    targets = None if symbols is None else set(symbols)
    grounds = tuple(
        g.model_copy(update={"description_cost": cost})
        if targets is None or g.symbol in targets
        else g
        for g in obs.grounds
    )
    return obs.model_copy(update={"grounds": grounds})


def recommend_remedies(agent_a: Agent, agent_b: Agent, obs: Observation) -> RemedyPlan:
    """Evaluate one remedy per basis and rank them.

    Remedies that remove the conclusion split come first, then smaller
    residual posterior distance, then basis name.
    """
    check_same_scenario(agent_a, agent_b)
    baseline = compare(
        infer(agent_a.model, obs, agent_a.profile),
        infer(agent_b.model, obs, agent_b.profile),
    )

    audited = externalize(obs)
    remedies = [
        Remedy(
            basis=Basis.EXTERNALIZATION,
            action="make every ground auditable (description cost 0)",
            residual=compare(
                infer(agent_a.model, audited, agent_a.profile),
                infer(agent_b.model, audited, agent_b.profile),
            ),
        )
    ]
    for basis, components in BASIS_COMPONENTS.items():
        result = align_profiles(agent_a, agent_b, obs, components)
        remedies.append(
            Remedy(
                basis=basis,
                action=f"align components {result.label}",
                residual=result.residual,
            )
        )

    ranked = sorted(
        remedies,
        key=lambda r: (not r.resolves, r.residual.posterior_tv, r.basis.value),
    )
    return RemedyPlan(baseline=baseline, remedies=tuple(ranked))

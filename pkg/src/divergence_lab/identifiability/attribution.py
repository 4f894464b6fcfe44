"""Divergence attribution by counterfactual model/profile swaps."""

from divergence_lab.core.models import Observation
from divergence_lab.engine.pipeline import infer
from divergence_lab.identifiability.alignment import check_same_scenario
from divergence_lab.identifiability.models import (
    Attribution,
    AttributionCell,
    AttributionReport,
)
from divergence_lab.learning.agent import Agent


def attribute_divergence(agent_a: Agent, agent_b: Agent, obs: Observation) -> AttributionReport:
    """Classify a conclusion split as θ-level, W-level, both or none.

    Four cells are evaluated: (model_A, θ_A), (model_A, θ_B), (model_B, θ_A),
    (model_B, θ_B). Swapping θ with either model fixed tests the θ effect;
    swapping models with either θ fixed tests the W effect.
    """
    check_same_scenario(agent_a, agent_b)

    agents = (agent_a, agent_b)
    # cells[(i, j)]: conclusion with agents[i].model and agents[j].profile
    cells: dict[tuple[int, int], str] = {
        (i, j): infer(agents[i].model, obs, agents[j].profile).conclusion
        for i in (0, 1)
        for j in (0, 1)
    }

    theta_effect = cells[(0, 0)] != cells[(0, 1)] or cells[(1, 0)] != cells[(1, 1)]
    w_effect = cells[(0, 0)] != cells[(1, 0)] or cells[(0, 1)] != cells[(1, 1)]

    if theta_effect and w_effect:
        attribution = Attribution.BOTH
    elif theta_effect:
        attribution = Attribution.THETA_LEVEL
    elif w_effect:
        attribution = Attribution.W_LEVEL
    else:
        attribution = Attribution.NONE

    return AttributionReport(
        attribution=attribution,
        theta_effect=theta_effect,
        w_effect=w_effect,
        cells=tuple(
            AttributionCell(model_of=agents[i].id, profile_of=agents[j].id, conclusion=c)
            for (i, j), c in cells.items()
        ),
    )

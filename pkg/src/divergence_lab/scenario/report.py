"""Run reports: per-step divergence, basis coordinates, attribution and design."""

from itertools import combinations

from pydantic import BaseModel, Field

from divergence_lab.core.models import Observation
from divergence_lab.engine.models import DivergenceReport
from divergence_lab.errors import ContractError
from divergence_lab.engine.pipeline import compare, compare_all, infer
from divergence_lab.identifiability.attribution import attribute_divergence
from divergence_lab.identifiability.design import (
    ConclusionProbe,
    design_intervention,
    design_observation,
)
from divergence_lab.identifiability.models import (
    AlignmentResult,
    AttributionReport,
    DiscriminationResult,
    RemedyPlan,
)
from divergence_lab.identifiability.remedies import recommend_remedies
from divergence_lab.learning.agent import model_distance
from divergence_lab.learning.environment import Environment
from divergence_lab.learning.episode import SimulationTrace, trace_stats
from divergence_lab.profile.models import BasisCoordinates, InferenceProfile
from divergence_lab.profile.operators import project_to_bases


# ============================================================
# Report models
# ============================================================


class DivergenceSummary(BaseModel):
    conclusions_differ: bool
    posterior_tv: float
    value_gap: float

    @classmethod
    def of(cls, report: DivergenceReport) -> "DivergenceSummary":
        return cls(
            conclusions_differ=report.conclusions_differ,
            posterior_tv=report.posterior_tv,
            value_gap=report.value_gap,
        )


class DivergencePoint(DivergenceSummary):
    """One row of the per-step series of an agent pair."""

    step: int
    model_distance: float


class AttributionSummary(BaseModel):
    attribution: str
    theta_effect: bool
    w_effect: bool
    # "model_of/profile_of" -> conclusion
    cells: dict[str, str]

    @classmethod
    def of(cls, report: AttributionReport) -> "AttributionSummary":
        return cls(
            attribution=report.attribution.value,
            theta_effect=report.theta_effect,
            w_effect=report.w_effect,
            cells={f"{c.model_of}/{c.profile_of}": c.conclusion for c in report.cells},
        )


class CandidateSummary(BaseModel):
    candidate: str
    score: float
    conclusions_differ: bool | None = None


class RankingSummary(BaseModel):
    mode: str
    delta: float
    passes: bool
    best_candidate: str
    ranking: list[CandidateSummary]

    @classmethod
    def of(cls, result: DiscriminationResult) -> "RankingSummary":
        return cls(
            mode=result.mode,
            delta=result.delta,
            passes=result.passes,
            best_candidate=result.best_candidate,
            ranking=[
                CandidateSummary(
                    candidate=c.candidate,
                    score=c.score,
                    conclusions_differ=c.conclusions_differ,
                )
                for c in result.ranking
            ],
        )


class RemedySummary(BaseModel):
    basis: str
    action: str
    resolves: bool
    residual: DivergenceSummary


def _remedies(plan: RemedyPlan) -> list[RemedySummary]:
    return [
        RemedySummary(
            basis=r.basis.value,
            action=r.action,
            resolves=r.resolves,
            residual=DivergenceSummary.of(r.residual),
        )
        for r in plan.remedies
    ]


class PairReport(BaseModel):
    """Everything measured for one (agent_a, agent_b) pair."""

    pair: str
    agent_a: str
    agent_b: str
    series: list[DivergencePoint]
    final: DivergenceSummary
    attribution_initial: AttributionSummary
    attribution_final: AttributionSummary
    observation_design: RankingSummary
    intervention_design: RankingSummary | None = None
    remedies: list[RemedySummary] = Field(default_factory=list)


class AgentReport(BaseModel):
    id: str
    label: str = ""
    profile: InferenceProfile
    mean_externalization: float
    mean_entropy: float
    hold_rate: float
    basis: BasisCoordinates
    final_conclusion: str


class ReportHeader(BaseModel):
    """What a report was computed from: scenario content, seed and step count."""

    scenario: str
    scenario_hash: str
    seed: int
    steps: int


class RunReport(ReportHeader):
    """Summary of one simulated episode, keyed by scenario hash and seed."""

    delta: float
    horizon: int
    probe: list[str]
    agents: list[AgentReport]
    pairs: list[PairReport]

    def pair(self, agent_a: str, agent_b: str) -> PairReport:
        for p in self.pairs:
            if (p.agent_a, p.agent_b) == (agent_a, agent_b):
                return p
        raise KeyError(f"{agent_a}|{agent_b}")


class AlignmentRow(BaseModel):
    components: str
    conclusion_a: str
    conclusion_b: str
    conclusions_differ: bool
    posterior_tv: float
    value_gap: float

    @classmethod
    def of(cls, result: AlignmentResult) -> "AlignmentRow":
        return cls(
            components=result.label,
            conclusion_a=result.outcome_a.conclusion,
            conclusion_b=result.outcome_b.conclusion,
            conclusions_differ=result.residual.conclusions_differ,
            posterior_tv=result.residual.posterior_tv,
            value_gap=result.residual.value_gap,
        )


class AlignmentReport(ReportHeader):
    """Residual divergence after copying profile components of agent_a into agent_b.

    ``steps`` counts the training steps before alignment; 0 means the
    agents as declared.
    """

    agent_a: str
    agent_b: str
    probe: list[str]
    rows: list[AlignmentRow]


class DiscriminationReport(ReportHeader):
    """A ranked design for one agent pair, flattened from RankingSummary."""

    agent_a: str
    agent_b: str
    horizon: int | None = None
    mode: str
    delta: float
    passes: bool
    best_candidate: str
    ranking: list[CandidateSummary]


def pair_key(agent_a: str, agent_b: str) -> str:
    return f"{agent_a}|{agent_b}"


# ============================================================
# Building
# ============================================================


def pairwise_series(trace: SimulationTrace) -> dict[tuple[str, str], list[DivergencePoint]]:
    """Per-step compare_all() and model_distance for every agent pair in declaration order."""
    series: dict[tuple[str, str], list[DivergencePoint]] = {
        pair: [] for pair in combinations(trace.agent_ids, 2)
    }
    for record in trace.steps:
        for (a, b), report in compare_all(record.outcomes).items():
            series[(a, b)].append(
                DivergencePoint(
                    step=record.step,
                    conclusions_differ=report.conclusions_differ,
                    posterior_tv=report.posterior_tv,
                    value_gap=report.value_gap,
                    model_distance=model_distance(record.models[a], record.models[b]),
                )
            )
    return series


def divergence_series(trace: SimulationTrace, agent_a: str, agent_b: str) -> list[DivergencePoint]:
    """Series of one pair; length equals the step count. Either order is accepted."""
    trace.agent(agent_a)
    trace.agent(agent_b)
    series = pairwise_series(trace)
    if (agent_a, agent_b) in series:
        return series[(agent_a, agent_b)]
    if (agent_b, agent_a) in series:
        return series[(agent_b, agent_a)]
    raise ContractError(f"a pair needs two distinct agents, got {agent_a!r} twice")


def build_run_report(
    trace: SimulationTrace,
    *,
    scenario_name: str,
    scenario_hash: str,
    probe: Observation,
    candidates: list[str],
    delta: float,
    horizon: int,
    env: Environment | None = None,
) -> RunReport:
    """Assemble the RunReport of a finished trace.

    Args:
        trace: The simulated episode.
        scenario_name: Name recorded in the report.
        scenario_hash: Content hash of the scenario that produced ``trace``.
        probe: Shared observation for final divergence, attribution and remedies.
        candidates: Symbols ranked by observation design.
        delta: Discrimination pass threshold.
        horizon: Number of future symbols scored by intervention design.
        env: Environment; intervention design runs when it declares interventions.
    """
    agents = []
    for agent in trace.final_agents:
        stats = trace_stats(trace, agent.id)
        basis = project_to_bases(agent.profile, stats)
        agents.append(
            AgentReport(
                id=agent.id,
                label=agent.label,
                profile=agent.profile,
                mean_externalization=stats.mean_externalization,
                mean_entropy=stats.mean_entropy,
                hold_rate=stats.hold_rate,
                basis=basis,
                final_conclusion=infer(agent.model, probe, agent.profile).conclusion,
            )
        )

    series = pairwise_series(trace)
    pairs = []
    for a_id, b_id in series:
        final_a, final_b = trace.agent(a_id), trace.agent(b_id)
        initial_a, initial_b = trace.initial_agent(a_id), trace.initial_agent(b_id)
        conclusion_probe = None
        if env is not None:
            conclusion_probe = ConclusionProbe(final_a.profile, final_b.profile, env)

        observation_design = design_observation(
            final_a.model,
            final_a.belief_state(),
            final_b.model,
            final_b.belief_state(),
            candidates,
            delta,
            probe=conclusion_probe,
        )
        intervention_design = None
        if env is not None and env.interventions:
            ranked = design_intervention(
                env, (final_a, final_b), list(env.interventions), horizon, delta
            )
            intervention_design = RankingSummary.of(ranked)

        pairs.append(
            PairReport(
                pair=pair_key(a_id, b_id),
                agent_a=a_id,
                agent_b=b_id,
                series=series[(a_id, b_id)],
                final=DivergenceSummary.of(
                    compare(
                        infer(final_a.model, probe, final_a.profile),
                        infer(final_b.model, probe, final_b.profile),
                    )
                ),
                attribution_initial=AttributionSummary.of(
                    attribute_divergence(initial_a, initial_b, probe)
                ),
                attribution_final=AttributionSummary.of(
                    attribute_divergence(final_a, final_b, probe)
                ),
                observation_design=RankingSummary.of(observation_design),
                intervention_design=intervention_design,
                remedies=_remedies(recommend_remedies(final_a, final_b, probe)),
            )
        )

    return RunReport(
        scenario=scenario_name,
        scenario_hash=scenario_hash,
        seed=trace.seed,
        steps=len(trace.steps),
        delta=delta,
        horizon=horizon,
        probe=list(probe.symbols),
        agents=agents,
        pairs=pairs,
    )


def build_alignment_report(
    results: list[AlignmentResult],
    *,
    header: ReportHeader,
    agent_a: str,
    agent_b: str,
    probe: Observation,
) -> AlignmentReport:
    return AlignmentReport(
        **header.model_dump(),
        agent_a=agent_a,
        agent_b=agent_b,
        probe=list(probe.symbols),
        rows=[AlignmentRow.of(r) for r in results],
    )


def build_discrimination_report(
    result: DiscriminationResult,
    *,
    header: ReportHeader,
    agent_a: str,
    agent_b: str,
    horizon: int | None = None,
) -> DiscriminationReport:
    """Flatten a ranked design under the header; ``horizon`` only applies to interventions."""
    ranking = RankingSummary.of(result)
    return DiscriminationReport(
        **header.model_dump(),
        agent_a=agent_a,
        agent_b=agent_b,
        horizon=horizon,
        mode=ranking.mode,
        delta=ranking.delta,
        passes=ranking.passes,
        best_candidate=ranking.best_candidate,
        ranking=ranking.ranking,
    )

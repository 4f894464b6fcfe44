"""Scenario-level drivers shared by the CLI commands."""

import logging
from dataclasses import dataclass

from divergence_lab.errors import ContractError, UnknownIdentifierError
from divergence_lab.learning.agent import Agent
from divergence_lab.learning.episode import SimulationTrace, run_episode
from divergence_lab.scenario.loader import scenario_hash
from divergence_lab.scenario.report import ReportHeader, RunReport, build_run_report
from divergence_lab.scenario.schema import RunSettings, Scenario

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimulationRun:
    """A simulated episode together with its report."""

    scenario: Scenario
    settings: RunSettings
    trace: SimulationTrace
    report: RunReport


def simulate(scenario: Scenario, settings: RunSettings) -> SimulationRun:
    """Run the episode and build its report.

    Args:
        scenario: Validated scenario.
        settings: Resolved steps, seed, delta and horizon.

    Returns:
        SimulationRun with the trace and the report.
    """
    trace = run_episode(scenario, settings.steps, settings.seed)
    report = build_run_report(
        trace,
        scenario_name=scenario.name,
        scenario_hash=scenario_hash(scenario),
        probe=scenario.probe_observation(),
        candidates=scenario.candidates(),
        delta=settings.delta,
        horizon=settings.horizon,
        env=scenario.build_environment(),
    )
    return SimulationRun(scenario=scenario, settings=settings, trace=trace, report=report)


def trained_agents(scenario: Scenario, steps: int, seed: int) -> list[Agent]:
    """Agents after ``steps`` steps of learning; the initial agents when steps is 0."""
    if steps <= 0:
        return scenario.build_agents()
    logger.info("training %s for %d steps (seed=%d)", scenario.name, steps, seed)
    return list(run_episode(scenario, steps, seed).final_agents)


def select_pair(agents: list[Agent], ids: str | None = None) -> tuple[Agent, Agent]:
    """Pick two agents by ``"a,b"``; the first two declared agents by default."""
    by_id = {a.id: a for a in agents}
    if ids is None:
        if len(agents) < 2:
            raise ContractError("the scenario declares fewer than two agents")
        return agents[0], agents[1]
    parts = [p.strip() for p in ids.split(",") if p.strip()]
    if len(parts) != 2:
        raise ContractError(f"expected two agent ids as 'a,b', got {ids!r}")
    for agent_id in parts:
        if agent_id not in by_id:
            raise UnknownIdentifierError("agent", agent_id)
    return by_id[parts[0]], by_id[parts[1]]


def report_header(scenario: Scenario, seed: int, steps: int) -> ReportHeader:
    """Header binding a report to the scenario content and the run that fed it."""
    return ReportHeader(
        scenario=scenario.name,
        scenario_hash=scenario_hash(scenario),
        seed=seed,
        steps=steps,
    )

"""Scenario files, run reports and output writers."""

from divergence_lab.scenario.loader import (
    dump_scenario,
    list_bundled,
    load_bundled,
    load_scenario,
    parse_scenario,
    parse_scenario_text,
    resolve_scenario,
    scenario_hash,
)
from divergence_lab.scenario.report import (
    AgentReport,
    AlignmentReport,
    DiscriminationReport,
    DivergencePoint,
    PairReport,
    ReportHeader,
    RunReport,
    build_alignment_report,
    build_discrimination_report,
    build_run_report,
    divergence_series,
    pairwise_series,
)
from divergence_lab.scenario.runner import (
    SimulationRun,
    report_header,
    select_pair,
    simulate,
    trained_agents,
)
from divergence_lab.scenario.schema import RunSettings, Scenario
from divergence_lab.scenario.writers import (
    read_report,
    report_json,
    write_report_file,
    write_run_files,
)

__all__ = [
    # Loading
    "Scenario",
    "RunSettings",
    "load_scenario",
    "load_bundled",
    "list_bundled",
    "parse_scenario",
    "parse_scenario_text",
    "resolve_scenario",
    "dump_scenario",
    "scenario_hash",
    # Running
    "SimulationRun",
    "simulate",
    "trained_agents",
    "select_pair",
    "report_header",
    # Reports
    "AgentReport",
    "AlignmentReport",
    "DiscriminationReport",
    "DivergencePoint",
    "PairReport",
    "ReportHeader",
    "RunReport",
    "build_alignment_report",
    "build_discrimination_report",
    "build_run_report",
    "divergence_series",
    "pairwise_series",
    "read_report",
    "report_json",
    "write_report_file",
    "write_run_files",
]

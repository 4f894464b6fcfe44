"""Output files of a run.

All files use LF newlines and serialize numbers with at most 12 significant
digits (``OutputConfig.number_format``):

- trace-<seed>.jsonl    one JSON object per step
- summary-<seed>.csv    per-step divergence of every agent pair
- agents-<seed>.csv     per-step entropy and gate decisions of every agent
- report-<seed>.json    the RunReport, pretty-printed

`divlab align` and `divlab discriminate` write align-<seed>.json and
discriminate-<mode>-<seed>.json the same way.
"""

import csv
import json
import logging
import math
from collections.abc import Iterable
from pathlib import Path
from typing import Any

from pydantic import BaseModel

from divergence_lab.learning.episode import SimulationTrace, StepRecord
from divergence_lab.scenario.report import RunReport

logger = logging.getLogger(__name__)

DEFAULT_NUMBER_FORMAT = ".12g"

SUMMARY_HEADER = (
    "step",
    "pair",
    "conclusions_differ",
    "posterior_tv",
    "value_gap",
    "model_distance",
)
AGENTS_HEADER = ("step", "agent", "entropy", "delta_eta", "decision", "externalization")


# ============================================================
# Number formatting
# ============================================================


def format_number(value: float, number_format: str = DEFAULT_NUMBER_FORMAT) -> str:
    """Text form used in CSV cells."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, number_format)


def to_jsonable(value: Any, number_format: str = DEFAULT_NUMBER_FORMAT) -> Any:
    """Round every float to the configured precision; inf becomes "inf", NaN null."""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        if math.isnan(value):
            return None
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return float(format(value, number_format))
    if isinstance(value, dict):
        return {str(k): to_jsonable(v, number_format) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v, number_format) for v in value]
    # numpy scalars
    if hasattr(value, "item"):
        return to_jsonable(value.item(), number_format)
    raise TypeError(f"cannot serialize {type(value).__name__}")


# ============================================================
# Trace
# ============================================================


def step_record_json(record: StepRecord) -> dict[str, Any]:
    """Replayable JSON form of one step."""
    agents = {}
    for agent_id, outcome in record.outcomes.items():
        update = record.updates[agent_id]
        agents[agent_id] = {
            "exposed": list(record.exposures[agent_id].symbols),
            "weights": list(outcome.weights),
            "posterior": list(outcome.posterior.posterior),
            "entropy": outcome.entropy,
            "action_values": dict(outcome.action_values),
            "conclusion": outcome.conclusion,
            "delta_eta": update.delta_eta,
            "decision": update.decision.value,
            "externalization": record.externalization[agent_id],
            "emission_counts": [list(row) for row in record.models[agent_id].emission_counts],
        }
    return {"step": record.step, "bundle": list(record.bundle.symbols), "agents": agents}


def write_trace_jsonl(
    trace: SimulationTrace,
    path: Path,
    number_format: str = DEFAULT_NUMBER_FORMAT,
) -> Path:
    with path.open("w", encoding="utf-8", newline="\n") as f:
        for record in trace.steps:
            line = json.dumps(to_jsonable(step_record_json(record), number_format))
            f.write(line + "\n")
    return path


# ============================================================
# CSV
# ============================================================


def _write_csv(path: Path, header: Iterable[str], rows: Iterable[Iterable[Any]]) -> Path:
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def write_summary_csv(
    report: RunReport,
    path: Path,
    number_format: str = DEFAULT_NUMBER_FORMAT,
) -> Path:
    """Per-step divergence rows, ordered by step and then by pair."""
    n_steps = min((len(p.series) for p in report.pairs), default=0)
    rows = []
    for i in range(n_steps):
        for pair in report.pairs:
            point = pair.series[i]
            rows.append(
                [
                    point.step,
                    pair.pair,
                    format_number(point.conclusions_differ),
                    format_number(point.posterior_tv, number_format),
                    format_number(point.value_gap, number_format),
                    format_number(point.model_distance, number_format),
                ]
            )
    return _write_csv(path, SUMMARY_HEADER, rows)


def write_agents_csv(
    trace: SimulationTrace,
    path: Path,
    number_format: str = DEFAULT_NUMBER_FORMAT,
) -> Path:
    rows = []
    for record in trace.steps:
        for agent_id in trace.agent_ids:
            update = record.updates[agent_id]
            rows.append(
                [
                    record.step,
                    agent_id,
                    format_number(record.outcomes[agent_id].entropy, number_format),
                    format_number(update.delta_eta, number_format),
                    update.decision.value,
                    format_number(record.externalization[agent_id], number_format),
                ]
            )
    return _write_csv(path, AGENTS_HEADER, rows)


# ============================================================
# Report
# ============================================================


def report_json(report: BaseModel, number_format: str = DEFAULT_NUMBER_FORMAT) -> str:
    """Pretty-printed JSON of any report model, newline-terminated."""
    data = to_jsonable(report.model_dump(mode="python"), number_format)
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def write_report_json(
    report: BaseModel,
    path: Path,
    number_format: str = DEFAULT_NUMBER_FORMAT,
) -> Path:
    path.write_text(report_json(report, number_format), encoding="utf-8", newline="\n")
    return path


def read_report(path: str | Path) -> RunReport:
    """Load a report written by write_report_json.

    Raises:
        OSError: The file cannot be read.
    """
    return RunReport.model_validate_json(Path(path).read_text(encoding="utf-8"))


def write_run_files(
    trace: SimulationTrace,
    report: RunReport,
    out_dir: str | Path,
    number_format: str = DEFAULT_NUMBER_FORMAT,
) -> list[Path]:
    """Write the four output files of one run, keyed by seed."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    seed = report.seed
    paths = [
        write_trace_jsonl(trace, out / f"trace-{seed}.jsonl", number_format),
        write_summary_csv(report, out / f"summary-{seed}.csv", number_format),
        write_agents_csv(trace, out / f"agents-{seed}.csv", number_format),
        write_report_json(report, out / f"report-{seed}.json", number_format),
    ]
    for path in paths:
        logger.info("wrote %s", path)
    return paths


def write_report_file(
    report: BaseModel,
    out_dir: str | Path,
    filename: str,
    number_format: str = DEFAULT_NUMBER_FORMAT,
) -> Path:
    """Write a single report into ``out_dir``, creating the directory."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = write_report_json(report, out / filename, number_format)
    logger.info("wrote %s", path)
    return path

"""CLI main entry point for Divergence Lab."""

from collections.abc import Iterator
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Optional

import typer
from dotenv import load_dotenv
from pydantic import BaseModel, ValidationError
from rich.console import Console
from rich.table import Table

from divergence_lab.config import Config, get_config
from divergence_lab.errors import ContractError, ScenarioValidationError
from divergence_lab.identifiability.alignment import align_profiles, sweep_alignment
from divergence_lab.identifiability.design import (
    ConclusionProbe,
    design_intervention,
    design_observation,
)
from divergence_lab.log import setup_logging
from divergence_lab.profile.models import Component
from divergence_lab.scenario.loader import list_bundled, load_bundled, resolve_scenario
from divergence_lab.scenario.report import (
    ReportHeader,
    RunReport,
    build_alignment_report,
    build_discrimination_report,
)
from divergence_lab.scenario.runner import (
    SimulationRun,
    report_header,
    select_pair,
    simulate,
    trained_agents,
)
from divergence_lab.scenario.schema import Scenario
from divergence_lab.scenario.writers import (
    format_number,
    read_report,
    report_json,
    write_report_file,
    write_run_files,
)

app = typer.Typer(
    name="divlab",
    help="Divergence Lab - simulate, align and discriminate inference profiles",
    add_completion=False,
)
console = Console()

DEFAULT_SCENARIO = "ai_regulation"

EXIT_VALIDATION = 2
EXIT_IO = 3


class DesignMode(str, Enum):
    OBSERVATION = "observation"
    INTERVENTION = "intervention"


@app.callback()
def main():
    """Load .env before any command reads the configuration."""
    load_dotenv()


# ============================================================
# Helpers
# ============================================================


def _setup(verbose: bool) -> Config:
    config = get_config()
    setup_logging("DEBUG" if verbose else config.log_level)
    return config


@contextmanager
def _exit_codes() -> Iterator[None]:
    """Map library errors onto exit codes: 2 for invalid input, 3 for I/O."""
    try:
        yield
    except (ScenarioValidationError, ContractError, ValidationError) as e:
        console.print(f"❌ {e}", style="red")
        raise typer.Exit(EXIT_VALIDATION) from e
    except OSError as e:
        console.print(f"❌ {e}", style="red")
        raise typer.Exit(EXIT_IO) from e


def parse_seed_range(text: str) -> list[int]:
    """``"3..7"`` -> [3, 4, 5, 6, 7]."""
    start, sep, stop = text.partition("..")
    try:
        first, last = int(start), int(stop)
    except ValueError:
        raise ContractError(f"expected a seed range like 1..10, got {text!r}") from None
    if not sep or first < 0 or last < first:
        raise ContractError(f"expected a seed range like 1..10, got {text!r}")
    return list(range(first, last + 1))


def _fmt(value: float) -> str:
    return format_number(value, ".4g")


def _run_one(
    scenario: Scenario,
    config: Config,
    steps: int | None,
    seed: int | None,
    out_dir: Path,
) -> SimulationRun:
    settings = scenario.settings(config, steps=steps, seed=seed)
    run = simulate(scenario, settings)
    write_run_files(run.trace, run.report, out_dir, config.output.number_format)
    return run


def _print_report(report: RunReport) -> None:
    _print_header(report)

    agents = Table(title="Agents")
    agents.add_column("Agent")
    agents.add_column("Externalization", justify="right")
    agents.add_column("Order", justify="right")
    agents.add_column("Abstraction", justify="right")
    agents.add_column("Entropy", justify="right")
    agents.add_column("Hold rate", justify="right")
    agents.add_column("Conclusion")
    for a in report.agents:
        agents.add_row(
            a.id,
            _fmt(a.basis.externalization),
            _fmt(a.basis.order),
            _fmt(a.basis.abstraction),
            _fmt(a.mean_entropy),
            _fmt(a.hold_rate),
            a.final_conclusion,
        )
    console.print(agents)

    pairs = Table(title="Pairs")
    pairs.add_column("Pair")
    pairs.add_column("Differ")
    pairs.add_column("Posterior TV", justify="right")
    pairs.add_column("Model distance", justify="right")
    pairs.add_column("Attribution (initial -> final)")
    pairs.add_column("Best observation")
    pairs.add_column("Best intervention")
    pairs.add_column("Best remedy")
    for p in report.pairs:
        last = p.series[-1] if p.series else None
        intervention = p.intervention_design.best_candidate if p.intervention_design else "-"
        pairs.add_row(
            p.pair,
            "yes" if p.final.conclusions_differ else "no",
            _fmt(p.final.posterior_tv),
            _fmt(last.model_distance) if last else "-",
            f"{p.attribution_initial.attribution} -> {p.attribution_final.attribution}",
            p.observation_design.best_candidate,
            intervention,
            p.remedies[0].basis if p.remedies else "-",
        )
    console.print(pairs)


def _print_header(header: ReportHeader) -> None:
    console.print(
        f"📊 [bold]{header.scenario}[/bold] seed={header.seed} steps={header.steps} "
        f"[dim]{header.scenario_hash[:12]}[/dim]\n"
    )


def _emit(report: BaseModel, config: Config, out: Optional[str], filename: str, as_json: bool):
    """Write the report under ``out`` when given; print it when ``as_json`` is set."""
    number_format = config.output.number_format
    if out is not None:
        with _exit_codes():
            path = write_report_file(report, out, filename, number_format)
        if not as_json:
            console.print(f"✅ Wrote [bold]{path}[/bold]")
    if as_json:
        typer.echo(report_json(report, number_format), nl=False)


# ============================================================
# Commands
# ============================================================


@app.command("simulate")
def simulate_command(
    scenario: str = typer.Option(
        DEFAULT_SCENARIO, "--scenario", "-s", help="Scenario file or bundled scenario name"
    ),
    seed: Optional[int] = typer.Option(None, "--seed", min=0, help="Random seed"),
    steps: Optional[int] = typer.Option(None, "--steps", "-n", min=1, help="Number of steps"),
    out: Optional[str] = typer.Option(None, "--out", "-o", help="Output directory"),
    seeds: Optional[str] = typer.Option(None, "--seeds", help="Batch of seeds, e.g. 1..10"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging"),
):
    """Run an episode and write trace, summaries and report."""
    config = _setup(verbose)
    out_dir = Path(out or config.output.directory)

    with _exit_codes():
        loaded = resolve_scenario(scenario)

        if seeds is None:
            with console.status("[bold green]Simulating..."):
                run = _run_one(loaded, config, steps, seed, out_dir)
            _print_report(run.report)
            console.print(
                f"\n✅ Wrote outputs for seed {run.report.seed} to [bold]{out_dir}[/bold]"
            )
            return

        batch = parse_seed_range(seeds)
        with console.status(f"[bold green]Simulating {len(batch)} seeds..."):
            with ThreadPoolExecutor(max_workers=config.batch.max_workers) as pool:
                runs = list(
                    pool.map(lambda s: _run_one(loaded, config, steps, s, out_dir), batch)
                )

    table = Table(title=f"Batch ({len(runs)} seeds)")
    table.add_column("Seed", justify="right")
    table.add_column("Pair")
    table.add_column("Differ")
    table.add_column("Posterior TV", justify="right")
    table.add_column("Model distance", justify="right")
    for run in runs:
        for p in run.report.pairs:
            table.add_row(
                str(run.report.seed),
                p.pair,
                "yes" if p.final.conclusions_differ else "no",
                _fmt(p.final.posterior_tv),
                _fmt(p.series[-1].model_distance),
            )
    console.print(table)
    console.print(f"\n✅ Wrote outputs for {len(runs)} seeds to [bold]{out_dir}[/bold]")


@app.command()
def align(
    scenario: str = typer.Option(
        DEFAULT_SCENARIO, "--scenario", "-s", help="Scenario file or bundled scenario name"
    ),
    components: str = typer.Option(
        "R,E,S,D", "--components", "-c", help="Components to synchronize, e.g. R,E"
    ),
    sweep: bool = typer.Option(False, "--sweep", help="Try all 15 non-empty subsets"),
    steps: int = typer.Option(0, "--steps", "-n", min=0, help="Train for n steps first"),
    seed: Optional[int] = typer.Option(None, "--seed", min=0, help="Random seed for training"),
    agents: Optional[str] = typer.Option(None, "--agents", help="Agent pair as a,b"),
    out: Optional[str] = typer.Option(None, "--out", "-o", help="Write align-<seed>.json here"),
    as_json: bool = typer.Option(False, "--json", help="Print JSON instead of a table"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging"),
):
    """Copy profile components of agent A into agent B and show what divergence remains."""
    config = _setup(verbose)

    with _exit_codes():
        loaded = resolve_scenario(scenario)
        settings = loaded.settings(config, seed=seed)
        agent_a, agent_b = select_pair(trained_agents(loaded, steps, settings.seed), agents)
        obs = loaded.probe_observation()
        if sweep:
            results = sweep_alignment(agent_a, agent_b, obs)
        else:
            results = [align_profiles(agent_a, agent_b, obs, Component.parse(components))]
        aligned = build_alignment_report(
            results,
            header=report_header(loaded, settings.seed, steps),
            agent_a=agent_a.id,
            agent_b=agent_b.id,
            probe=obs,
        )

    if not as_json:
        _print_header(aligned)
        table = Table(title=f"Alignment {agent_a.id} -> {agent_b.id}")
        table.add_column("Components")
        table.add_column(f"{agent_a.id}")
        table.add_column(f"{agent_b.id}")
        table.add_column("Differ")
        table.add_column("Posterior TV", justify="right")
        table.add_column("Value gap", justify="right")
        for row in aligned.rows:
            table.add_row(
                row.components,
                row.conclusion_a,
                row.conclusion_b,
                "yes" if row.conclusions_differ else "no",
                _fmt(row.posterior_tv),
                _fmt(row.value_gap),
            )
        console.print(table)
    _emit(aligned, config, out, f"align-{settings.seed}.json", as_json)


@app.command()
def discriminate(
    scenario: str = typer.Option(
        DEFAULT_SCENARIO, "--scenario", "-s", help="Scenario file or bundled scenario name"
    ),
    mode: DesignMode = typer.Option(DesignMode.OBSERVATION, "--mode", "-m", help="What to rank"),
    delta: Optional[float] = typer.Option(None, "--delta", min=0.0, help="Pass threshold"),
    horizon: Optional[int] = typer.Option(
        None, "--horizon", min=1, help="Future symbols scored per intervention"
    ),
    steps: int = typer.Option(0, "--steps", "-n", min=0, help="Train for n steps first"),
    seed: Optional[int] = typer.Option(None, "--seed", min=0, help="Random seed for training"),
    agents: Optional[str] = typer.Option(None, "--agents", help="Agent pair as a,b"),
    out: Optional[str] = typer.Option(
        None, "--out", "-o", help="Write discriminate-<mode>-<seed>.json here"
    ),
    as_json: bool = typer.Option(False, "--json", help="Print JSON instead of a table"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging"),
):
    """Rank observations or interventions by how well they separate two agents."""
    config = _setup(verbose)

    with _exit_codes():
        loaded = resolve_scenario(scenario)
        settings = loaded.settings(config, seed=seed, delta=delta, horizon=horizon)
        agent_a, agent_b = select_pair(trained_agents(loaded, steps, settings.seed), agents)
        env = loaded.build_environment()
        if mode is DesignMode.OBSERVATION:
            result = design_observation(
                agent_a.model,
                agent_a.belief_state(),
                agent_b.model,
                agent_b.belief_state(),
                loaded.candidates(),
                settings.delta,
                probe=ConclusionProbe(agent_a.profile, agent_b.profile, env),
            )
        else:
            result = design_intervention(
                env,
                (agent_a, agent_b),
                list(env.interventions),
                settings.horizon,
                settings.delta,
            )
        design = build_discrimination_report(
            result,
            header=report_header(loaded, settings.seed, steps),
            agent_a=agent_a.id,
            agent_b=agent_b.id,
            horizon=settings.horizon if mode is DesignMode.INTERVENTION else None,
        )

    if not as_json:
        _print_header(design)
        verdict = "[green]passes[/green]" if design.passes else "[yellow]below threshold[/yellow]"
        table = Table(title=f"{mode.value.capitalize()} design {agent_a.id} vs {agent_b.id}")
        table.add_column("#", justify="right", style="dim")
        table.add_column("Candidate")
        table.add_column("Score", justify="right")
        table.add_column("Conclusions differ")
        for i, c in enumerate(design.ranking, 1):
            differ = "-"
            if c.conclusions_differ is not None:
                differ = "yes" if c.conclusions_differ else "no"
            table.add_row(str(i), c.candidate, _fmt(c.score), differ)
        console.print(table)
        console.print(
            f"\nBest: [bold]{design.best_candidate}[/bold] "
            f"(score {_fmt(design.ranking[0].score)}, delta {_fmt(design.delta)}) {verdict}"
        )
    _emit(design, config, out, f"discriminate-{mode.value}-{settings.seed}.json", as_json)


@app.command()
def report(
    path: str = typer.Argument(..., help="Path to a report-<seed>.json file"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging"),
):
    """Render a written run report."""
    _setup(verbose)
    with _exit_codes():
        loaded = read_report(path)
    _print_report(loaded)


@app.command()
def scenarios():
    """List the bundled scenarios."""
    table = Table(title="Bundled scenarios")
    table.add_column("Name")
    table.add_column("Agents", justify="right")
    table.add_column("Description")
    for name in list_bundled():
        scenario = load_bundled(name)
        table.add_row(name, str(len(scenario.agents)), scenario.description)
    console.print(table)


if __name__ == "__main__":
    app()

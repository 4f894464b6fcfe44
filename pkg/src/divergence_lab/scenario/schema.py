"""Scenario file schema.

A scenario is one UTF-8 JSON document with top-level keys
``name, symbols, hypotheses, actions, environment, agents, run``.
Field-level checks come from pydantic; cross-references are resolved by
``check_references`` so that every failure names its key path.
"""

import math
from collections import Counter

from pydantic import BaseModel, ConfigDict, Field, model_validator

from divergence_lab.config import Config
from divergence_lab.core.models import (
    PROB_TOL,
    Hypothesis,
    HypothesisSpace,
    Observation,
    WorldModel,
)
from divergence_lab.errors import ScenarioValidationError
from divergence_lab.learning.agent import Agent
from divergence_lab.learning.environment import CatalogEntry, Environment, Intervention, Regime
from divergence_lab.learning.rng import ENVIRONMENT_STREAM
from divergence_lab.profile.models import InferenceProfile


class _Spec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class ActionSpec(_Spec):
    id: str = Field(min_length=1)
    label: str = ""


class HypothesisSpec(_Spec):
    id: str = Field(min_length=1)
    label: str = ""
    outcome_streams: dict[str, tuple[float, ...]]


class RegimeSpec(_Spec):
    label: str = ""
    probabilities: dict[str, float]
    realizes: str | None = None


class CatalogSpec(_Spec):
    description_cost: float = Field(ge=0.0)
    compatibility: float = 0.0


class InterventionSpec(_Spec):
    regime: str
    label: str = ""


class EnvironmentSpec(_Spec):
    active_regime: str
    bundle_size: int = Field(ge=1)
    regimes: dict[str, RegimeSpec] = Field(min_length=1)
    catalog: dict[str, CatalogSpec]
    interventions: dict[str, InterventionSpec] = Field(default_factory=dict)


class ModelSpec(_Spec):
    prior: dict[str, float]
    emission_counts: dict[str, dict[str, float]]
    smoothing: float = Field(default=1.0, gt=0.0)


class AgentSpec(_Spec):
    id: str = Field(min_length=1)
    label: str = ""
    exposure_k: int = Field(default=1, ge=1)
    stream: str | None = None
    profile: InferenceProfile
    model: ModelSpec


class RunSpec(_Spec):
    steps: int | None = Field(default=None, ge=1)
    seed: int | None = Field(default=None, ge=0)
    delta: float | None = Field(default=None, ge=0.0)
    horizon: int | None = Field(default=None, ge=1)
    probe: tuple[str, ...] | None = None
    candidates: tuple[str, ...] | None = None


class RunSettings(BaseModel):
    """Run parameters after applying flags, the scenario and config defaults."""

    steps: int
    seed: int
    delta: float
    horizon: int


def _duplicates(ids: list[str]) -> list[str]:
    return sorted(i for i, n in Counter(ids).items() if n > 1)


def _check_distribution(path: str, values: dict[str, float], expected: list[str], what: str):
    for key in values:
        if key not in expected:
            raise ScenarioValidationError(f"{path}.{key}", f"references undeclared {what} {key!r}")
    missing = [k for k in expected if k not in values]
    if missing:
        raise ScenarioValidationError(path, f"missing entries for {what}s {missing}")
    for key, p in values.items():
        if p < 0 or math.isnan(p):
            raise ScenarioValidationError(f"{path}.{key}", f"probability {p} is negative")
    total = math.fsum(values.values())
    if abs(total - 1.0) > PROB_TOL:
        raise ScenarioValidationError(path, f"probabilities sum to {total:.12g}, expected 1")


class Scenario(_Spec):
    """A complete, cross-checked simulation scenario."""

    name: str = Field(min_length=1)
    description: str = ""
    symbols: tuple[str, ...] = Field(min_length=1)
    hypotheses: tuple[HypothesisSpec, ...] = Field(min_length=1)
    actions: tuple[ActionSpec, ...] = Field(min_length=1)
    environment: EnvironmentSpec
    agents: tuple[AgentSpec, ...] = Field(min_length=1)
    run: RunSpec = Field(default_factory=RunSpec)

    @model_validator(mode="after")
    def _resolve(self) -> "Scenario":
        check_references(self)
        return self

    # ============================================================
    # Domain objects
    # ============================================================

    @property
    def hypothesis_ids(self) -> list[str]:
        return [h.id for h in self.hypotheses]

    @property
    def action_ids(self) -> list[str]:
        return [a.id for a in self.actions]

    @property
    def agent_ids(self) -> list[str]:
        return [a.id for a in self.agents]

    def hypothesis_space(self) -> HypothesisSpace:
        return HypothesisSpace(
            hypotheses=tuple(
                Hypothesis(id=h.id, label=h.label, outcome_streams=h.outcome_streams)
                for h in self.hypotheses
            )
        )

    def build_environment(self) -> Environment:
        env = self.environment
        return Environment(
            symbols=self.symbols,
            regimes={
                regime_id: Regime(
                    probabilities=tuple(spec.probabilities[s] for s in self.symbols),
                    realizes=spec.realizes,
                )
                for regime_id, spec in env.regimes.items()
            },
            active_regime=env.active_regime,
            bundle_size=env.bundle_size,
            catalog={
                symbol: CatalogEntry(
                    description_cost=entry.description_cost,
                    compatibility=entry.compatibility,
                )
                for symbol, entry in env.catalog.items()
            },
            interventions={
                key: Intervention(regime=spec.regime, label=spec.label)
                for key, spec in env.interventions.items()
            },
        )

    def world_model(self, agent_id: str) -> WorldModel:
        spec = self.agent_spec(agent_id).model
        hypotheses = self.hypothesis_ids
        return WorldModel(
            space=self.hypothesis_space(),
            symbols=self.symbols,
            prior=tuple(spec.prior[h] for h in hypotheses),
            emission_counts=tuple(
                tuple(spec.emission_counts.get(h, {}).get(s, 0.0) for s in self.symbols)
                for h in hypotheses
            ),
            smoothing=spec.smoothing,
        )

    def agent_spec(self, agent_id: str) -> AgentSpec:
        for spec in self.agents:
            if spec.id == agent_id:
                return spec
        raise ScenarioValidationError("agents", f"no agent with id {agent_id!r}")

    def build_agents(self) -> list[Agent]:
        return [
            Agent(
                id=spec.id,
                label=spec.label,
                model=self.world_model(spec.id),
                profile=spec.profile,
                exposure_k=spec.exposure_k,
                stream=spec.stream,
            )
            for spec in self.agents
        ]

    def probe_observation(self, step: int = 0) -> Observation:
        """Observation used for alignment and attribution (one of each symbol by default)."""
        symbols = self.run.probe or self.symbols
        return self.build_environment().observation(list(symbols), step=step)

    def candidates(self) -> list[str]:
        return list(self.run.candidates or self.symbols)

    def settings(
        self,
        config: Config,
        steps: int | None = None,
        seed: int | None = None,
        delta: float | None = None,
        horizon: int | None = None,
    ) -> RunSettings:
        """Flags win over the scenario's run block, which wins over config."""
        defaults = config.simulation

        def pick(flag, scenario_value, default):
            if flag is not None:
                return flag
            return scenario_value if scenario_value is not None else default

        return RunSettings(
            steps=pick(steps, self.run.steps, defaults.default_steps),
            seed=pick(seed, self.run.seed, defaults.default_seed),
            delta=pick(delta, self.run.delta, defaults.default_delta),
            horizon=pick(horizon, self.run.horizon, defaults.default_horizon),
        )


def check_references(scenario: Scenario) -> None:
    """Resolve every cross-reference; raise ScenarioValidationError on the first failure."""
    symbols = list(scenario.symbols)
    hypotheses = [h.id for h in scenario.hypotheses]
    actions = [a.id for a in scenario.actions]
    env = scenario.environment

    declared = {
        "symbols": symbols,
        "hypotheses": hypotheses,
        "actions": actions,
        "agents": [a.id for a in scenario.agents],
    }
    for path, ids in declared.items():
        dupes = _duplicates(ids)
        if dupes:
            raise ScenarioValidationError(path, f"duplicate ids {dupes}")

    horizon = None
    for i, h in enumerate(scenario.hypotheses):
        base = f"hypotheses.{i}.outcome_streams"
        for action, stream in h.outcome_streams.items():
            if action not in actions:
                raise ScenarioValidationError(
                    f"{base}.{action}", f"references undeclared action {action!r}"
                )
            if len(stream) == 0:
                raise ScenarioValidationError(f"{base}.{action}", "stream is empty")
            horizon = horizon or len(stream)
            if len(stream) != horizon:
                raise ScenarioValidationError(
                    f"{base}.{action}", f"stream length {len(stream)} differs from {horizon}"
                )
        missing = [a for a in actions if a not in h.outcome_streams]
        if missing:
            raise ScenarioValidationError(base, f"missing streams for actions {missing}")

    if env.active_regime not in env.regimes:
        raise ScenarioValidationError(
            "environment.active_regime", f"references undeclared regime {env.active_regime!r}"
        )
    for regime_id, regime in env.regimes.items():
        base = f"environment.regimes.{regime_id}"
        _check_distribution(f"{base}.probabilities", regime.probabilities, symbols, "symbol")
        if regime.realizes is not None and regime.realizes not in hypotheses:
            raise ScenarioValidationError(
                f"{base}.realizes", f"references undeclared hypothesis {regime.realizes!r}"
            )
    for symbol in env.catalog:
        if symbol not in symbols:
            raise ScenarioValidationError(
                f"environment.catalog.{symbol}", f"references undeclared symbol {symbol!r}"
            )
    missing = [s for s in symbols if s not in env.catalog]
    if missing:
        raise ScenarioValidationError("environment.catalog", f"missing symbols {missing}")
    for key, spec in env.interventions.items():
        if spec.regime not in env.regimes:
            raise ScenarioValidationError(
                f"environment.interventions.{key}.regime",
                f"references undeclared regime {spec.regime!r}",
            )

    for i, agent in enumerate(scenario.agents):
        base = f"agents.{i}"
        _check_distribution(f"{base}.model.prior", agent.model.prior, hypotheses, "hypothesis")
        for h, row in agent.model.emission_counts.items():
            if h not in hypotheses:
                raise ScenarioValidationError(
                    f"{base}.model.emission_counts.{h}", f"references undeclared hypothesis {h!r}"
                )
            for s, count in row.items():
                path = f"{base}.model.emission_counts.{h}.{s}"
                if s not in symbols:
                    raise ScenarioValidationError(path, f"references undeclared symbol {s!r}")
                if count < 0 or math.isnan(count):
                    raise ScenarioValidationError(path, f"count {count} is negative")
        if agent.exposure_k > env.bundle_size:
            raise ScenarioValidationError(
                f"{base}.exposure_k",
                f"exposure {agent.exposure_k} exceeds bundle size {env.bundle_size}",
            )
        if (agent.stream or agent.id) == ENVIRONMENT_STREAM:
            raise ScenarioValidationError(
                f"{base}.stream", f"stream label {ENVIRONMENT_STREAM!r} is reserved"
            )

    for field_name in ("probe", "candidates"):
        chosen = getattr(scenario.run, field_name)
        if chosen is None:
            continue
        if len(chosen) == 0:
            raise ScenarioValidationError(f"run.{field_name}", "must not be empty")
        for j, s in enumerate(chosen):
            if s not in symbols:
                raise ScenarioValidationError(
                    f"run.{field_name}.{j}", f"references undeclared symbol {s!r}"
                )


def scenario_warnings(scenario: Scenario) -> list[str]:
    """Valid but suspicious content worth a log line."""
    warnings = []
    for regime_id, regime in scenario.environment.regimes.items():
        for symbol, p in regime.probabilities.items():
            if p == 0.0:
                warnings.append(f"regime {regime_id!r} never emits symbol {symbol!r}")
    for agent in scenario.agents:
        for h, p in agent.model.prior.items():
            if p == 0.0:
                warnings.append(f"agent {agent.id!r} rules out hypothesis {h!r} a priori")
    return warnings

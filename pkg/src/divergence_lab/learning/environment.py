"""Environment: regimes that generate the shared evidence bundles."""

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from divergence_lab.core.models import PROB_TOL, Ground, Observation
from divergence_lab.errors import ContractError, UnknownIdentifierError


class Regime(BaseModel):
    """Emission distribution over the symbol alphabet.

    ``realizes`` names the hypothesis whose mechanism this regime is, if any.
    """

    model_config = ConfigDict(frozen=True)

    probabilities: tuple[float, ...]
    realizes: str | None = None


class CatalogEntry(BaseModel):
    """How a symbol materialises as a ground."""

    model_config = ConfigDict(frozen=True)

    description_cost: float = Field(ge=0.0)
    compatibility: float = 0.0


class Intervention(BaseModel):
    """do(a): force the environment into ``regime``."""

    model_config = ConfigDict(frozen=True)

    regime: str
    label: str = ""


class Environment(BaseModel):
    """Data-generating process shared by every agent."""

    model_config = ConfigDict(frozen=True)

    symbols: tuple[str, ...] = Field(min_length=1)
    regimes: dict[str, Regime] = Field(min_length=1)
    active_regime: str
    bundle_size: int = Field(ge=1)
    catalog: dict[str, CatalogEntry]
    interventions: dict[str, Intervention] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_references(self) -> "Environment":
        for regime_id, regime in self.regimes.items():
            probs = regime.probabilities
            if len(probs) != len(self.symbols):
                raise ValueError(
                    f"regime {regime_id!r} has {len(probs)} probabilities "
                    f"for {len(self.symbols)} symbols"
                )
            if any(p < 0 or math.isnan(p) for p in probs):
                raise ValueError(f"regime {regime_id!r} has a negative probability")
            total = math.fsum(probs)
            if abs(total - 1.0) > PROB_TOL:
                raise ValueError(f"regime {regime_id!r} sums to {total!r}, expected 1")
        if self.active_regime not in self.regimes:
            raise ValueError(f"active regime {self.active_regime!r} is not declared")
        missing = set(self.symbols) - set(self.catalog)
        if missing:
            raise ValueError(f"catalog lacks symbols {sorted(missing)}")
        for intervention_id, intervention in self.interventions.items():
            if intervention.regime not in self.regimes:
                raise ValueError(
                    f"intervention {intervention_id!r} forces undeclared regime "
                    f"{intervention.regime!r}"
                )
        return self

    def regime(self, regime_id: str | None = None) -> Regime:
        regime_id = regime_id or self.active_regime
        try:
            return self.regimes[regime_id]
        except KeyError:
            raise UnknownIdentifierError("regime", regime_id) from None

    def ground(self, symbol: str, ground_id: str) -> Ground:
        """Materialise ``symbol`` as a ground using the catalog."""
        try:
            entry = self.catalog[symbol]
        except KeyError:
            raise UnknownIdentifierError("symbol", symbol) from None
        return Ground(
            id=ground_id,
            symbol=symbol,
            description_cost=entry.description_cost,
            compatibility=entry.compatibility,
        )

    def observation(self, symbols: list[str] | tuple[str, ...], step: int = 0) -> Observation:
        """Observation made of the given symbols, in order."""
        if not symbols:
            raise ContractError("an observation needs at least one symbol")
        return Observation(
            step=step,
            grounds=tuple(self.ground(s, f"t{step}-{i}") for i, s in enumerate(symbols)),
        )

    def forced(self, intervention_id: str) -> "Environment":
        """Copy with the active regime replaced by the intervention's regime."""
        try:
            intervention = self.interventions[intervention_id]
        except KeyError:
            raise ContractError(f"unknown intervention: {intervention_id!r}") from None
        return self.model_copy(update={"active_regime": intervention.regime})


def emit_bundle(env: Environment, rng: np.random.Generator, step: int = 0) -> Observation:
    """Draw ``bundle_size`` symbols i.i.d. from the active regime."""
    probs = np.asarray(env.regime().probabilities, dtype=float)
    drawn = rng.choice(len(env.symbols), size=env.bundle_size, p=probs / probs.sum())
    return env.observation([env.symbols[i] for i in drawn], step=step)

"""Inference profile θ = (R, E, S, D) and the coordinates it projects onto."""

import math
from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator

from divergence_lab.errors import ContractError


class Component(str, Enum):
    """The four operational degrees of freedom of an inference profile."""

    R = "R"  # reference
    E = "E"  # exploration
    S = "S"  # stabilization
    D = "D"  # horizon

    @classmethod
    def parse(cls, text: str) -> frozenset["Component"]:
        """Parse a comma-separated list such as ``"R,E"``."""
        parts = [p.strip().upper() for p in text.split(",") if p.strip()]
        if not parts:
            raise ContractError("component set must not be empty")
        try:
            return frozenset(cls(p) for p in parts)
        except ValueError:
            raise ContractError(f"unknown component in {text!r}; expected R, E, S, D") from None


COMPONENT_ORDER: tuple[Component, ...] = (Component.R, Component.E, Component.S, Component.D)

# Profile fields governed by each component
COMPONENT_FIELDS: dict[Component, tuple[str, ...]] = {
    Component.R: ("alpha", "beta_r"),
    Component.E: ("temperature",),
    Component.S: ("tau",),
    Component.D: ("gamma",),
}


def ordered_components(components: Iterable[Component]) -> tuple[Component, ...]:
    chosen = set(components)
    return tuple(c for c in COMPONENT_ORDER if c in chosen)


class GateDecision(str, Enum):
    """Outcome of the stabilization gate."""

    UPDATE = "update"
    HOLD = "hold"


class InferenceProfile(BaseModel):
    """Operational settings (α, β_R, T_E, τ, γ) of one agent."""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(default=1.0, gt=0.0)
    beta_r: float = 1.0
    temperature: float = Field(default=1.0, gt=0.0)
    tau: float = Field(default=0.0, ge=0.0)
    gamma: float = Field(default=0.9, ge=0.0, le=1.0)

    @field_validator("tau", mode="before")
    @classmethod
    def _parse_infinite_tau(cls, value):
        if isinstance(value, str) and value.strip().lower() in ("inf", "+inf", "infinity"):
            return math.inf
        return value

    @field_validator("beta_r")
    @classmethod
    def _finite_beta(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("beta_r must be finite")
        return value

    @field_serializer("tau")
    def _serialize_tau(self, tau: float):
        return "inf" if math.isinf(tau) else tau

    @property
    def is_frozen(self) -> bool:
        """True when no update can ever pass the gate."""
        return math.isinf(self.tau)

    def with_components(
        self,
        source: "InferenceProfile",
        components: Iterable[Component],
    ) -> "InferenceProfile":
        """Copy of this profile with the named components taken from ``source``."""
        update = {}
        for component in components:
            for name in COMPONENT_FIELDS[Component(component)]:
                update[name] = getattr(source, name)
        return self.model_copy(update=update)


@dataclass(frozen=True)
class TraceStats:
    """Run statistics feeding the basis projection.

    Attributes:
        mean_externalization: Σ_i w_i x_i per step, averaged over steps.
        mean_entropy: Hypothesis entropy divided by log|H|, averaged over steps.
        hold_rate: Fraction of steps whose update was gated out.
    """

    mean_externalization: float
    mean_entropy: float
    hold_rate: float


class BasisCoordinates(BaseModel):
    """Position of a profile on the three bases."""

    model_config = ConfigDict(frozen=True)

    externalization: float = Field(ge=0.0, le=1.0)
    order: float = Field(ge=0.0, le=1.0)
    abstraction: float = Field(ge=0.0, le=1.0)

"""Data models for the hypothesis space, evidence and world models."""

import math
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from divergence_lab.errors import ContractError, UnknownIdentifierError

PROB_TOL = 1e-9


class Hypothesis(BaseModel):
    """A candidate explanation of the world with per-action utility streams."""

    model_config = ConfigDict(frozen=True)

    id: str = Field(min_length=1)
    label: str = ""
    outcome_streams: dict[str, tuple[float, ...]]

    @field_validator("outcome_streams")
    @classmethod
    def _non_empty_streams(cls, streams: dict[str, tuple[float, ...]]):
        if not streams:
            raise ValueError("at least one action stream is required")
        for action, stream in streams.items():
            if len(stream) == 0:
                raise ValueError(f"stream for action {action!r} is empty")
        return streams

    def __str__(self) -> str:
        return f"Hypothesis({self.id})"


class HypothesisSpace(BaseModel):
    """Ordered hypotheses sharing one action set and one stream length T_D."""

    model_config = ConfigDict(frozen=True)

    hypotheses: tuple[Hypothesis, ...] = Field(min_length=1)

    @model_validator(mode="after")
    def _check_consistency(self) -> "HypothesisSpace":
        ids = [h.id for h in self.hypotheses]
        if len(set(ids)) != len(ids):
            raise ValueError(f"hypothesis ids must be unique, got {ids}")

        first = self.hypotheses[0]
        actions = set(first.outcome_streams)
        horizon = len(next(iter(first.outcome_streams.values())))
        for h in self.hypotheses:
            if set(h.outcome_streams) != actions:
                raise ValueError(f"hypothesis {h.id!r} declares a different action set")
            for action, stream in h.outcome_streams.items():
                if len(stream) != horizon:
                    raise ValueError(
                        f"stream {h.id}/{action} has length {len(stream)}, expected {horizon}"
                    )
        return self

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(h.id for h in self.hypotheses)

    @property
    def actions(self) -> tuple[str, ...]:
        """Action ids in lexicographic order."""
        return tuple(sorted(self.hypotheses[0].outcome_streams))

    @property
    def horizon(self) -> int:
        return len(next(iter(self.hypotheses[0].outcome_streams.values())))

    def index(self, hypothesis_id: str) -> int:
        for i, h in enumerate(self.hypotheses):
            if h.id == hypothesis_id:
                return i
        raise UnknownIdentifierError("hypothesis", hypothesis_id)

    def stream_tensor(self) -> np.ndarray:
        """Utilities shaped (|H|, |A|, T_D), actions in lexicographic order."""
        actions = self.actions
        return np.array(
            [[h.outcome_streams[a] for a in actions] for h in self.hypotheses],
            dtype=float,
        )

    def value_matrix(self, gamma: float) -> np.ndarray:
        """Discounted value of every (hypothesis, action), shaped (|H|, |A|)."""
        # numpy defines 0.0 ** 0 as 1.0
        factors = np.power(float(gamma), np.arange(self.horizon, dtype=float))
        return self.stream_tensor() @ factors


class Ground(BaseModel):
    """One unit of evidence: a symbol with its description cost and compatibility."""

    model_config = ConfigDict(frozen=True)

    id: str
    symbol: str
    description_cost: float = Field(ge=0.0)
    compatibility: float = 0.0


class Observation(BaseModel):
    """A timestamped bundle of grounds presented to agents."""

    model_config = ConfigDict(frozen=True)

    step: int = Field(default=0, ge=0)
    grounds: tuple[Ground, ...] = Field(min_length=1)

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(g.symbol for g in self.grounds)

    def __len__(self) -> int:
        return len(self.grounds)


class WorldModel(BaseModel):
    """Prior plus smoothed per-hypothesis emission counts (the learnable φ).

    ``emission_counts[i][j]`` is the pseudo-count of symbol ``symbols[j]``
    under hypothesis ``space.hypotheses[i]``.
    """

    model_config = ConfigDict(frozen=True)

    space: HypothesisSpace
    symbols: tuple[str, ...] = Field(min_length=1)
    prior: tuple[float, ...]
    emission_counts: tuple[tuple[float, ...], ...]
    smoothing: float = Field(default=1.0, gt=0.0)

    @model_validator(mode="after")
    def _check_shapes(self) -> "WorldModel":
        n_h = len(self.space.hypotheses)
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("symbols must be unique")
        if len(self.prior) != n_h:
            raise ValueError(f"prior has {len(self.prior)} entries for {n_h} hypotheses")
        if any(p < 0 or math.isnan(p) for p in self.prior):
            raise ValueError("prior entries must be >= 0")
        total = math.fsum(self.prior)
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"prior sums to {total!r}, expected 1")
        if len(self.emission_counts) != n_h:
            raise ValueError(f"emission_counts has {len(self.emission_counts)} rows for {n_h}")
        for row in self.emission_counts:
            if len(row) != len(self.symbols):
                raise ValueError(f"emission row has {len(row)} entries for {len(self.symbols)}")
            if any(c < 0 or math.isnan(c) for c in row):
                raise ValueError("emission counts must be >= 0")
        return self

    @property
    def hypotheses(self) -> tuple[str, ...]:
        return self.space.ids

    def hypothesis_index(self, hypothesis_id: str) -> int:
        return self.space.index(hypothesis_id)

    def symbol_index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise UnknownIdentifierError("symbol", symbol) from None

    def emission_matrix(self) -> np.ndarray:
        """Smoothed emission probabilities shaped (|H|, |Σ|); rows sum to 1."""
        counts = np.asarray(self.emission_counts, dtype=float) + self.smoothing
        return counts / counts.sum(axis=1, keepdims=True)

    def with_counts(self, counts: np.ndarray) -> "WorldModel":
        """Copy with replaced counts (shape checked, no re-validation)."""
        counts = np.asarray(counts, dtype=float)
        if counts.shape != (len(self.prior), len(self.symbols)):
            raise ContractError(f"count table shape {counts.shape} does not match model")
        return self.model_copy(
            update={"emission_counts": tuple(tuple(float(c) for c in row) for row in counts)}
        )

    @classmethod
    def uniform(
        cls,
        space: HypothesisSpace,
        symbols: tuple[str, ...],
        smoothing: float = 1.0,
    ) -> "WorldModel":
        """Uniform prior and zero counts."""
        n_h = len(space.hypotheses)
        return cls(
            space=space,
            symbols=symbols,
            prior=tuple([1.0 / n_h] * n_h),
            emission_counts=tuple(tuple([0.0] * len(symbols)) for _ in range(n_h)),
            smoothing=smoothing,
        )


@dataclass(frozen=True)
class LatentState:
    """Posterior over hypotheses at a time step (the latent state z_t)."""

    hypotheses: tuple[str, ...]
    posterior: tuple[float, ...]
    step: int = 0

    def __post_init__(self):
        if len(self.hypotheses) != len(self.posterior):
            raise ContractError("posterior length does not match hypotheses")

    def as_array(self) -> np.ndarray:
        return np.asarray(self.posterior, dtype=float)

    def probability(self, hypothesis_id: str) -> float:
        try:
            return self.posterior[self.hypotheses.index(hypothesis_id)]
        except ValueError:
            raise UnknownIdentifierError("hypothesis", hypothesis_id) from None

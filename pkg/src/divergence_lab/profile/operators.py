"""The four θ operators and the projection onto the three bases.

- R: externalizability_score + reference_weights (softmax over β_R·x + u)
- E: temper (posterior tempering) and hypothesis_entropy
- S: stabilization_gate
- D: discounted_value
"""

import math
from collections.abc import Sequence

import numpy as np
from scipy.special import entr, softmax

from divergence_lab.core.models import Ground
from divergence_lab.errors import ContractError
from divergence_lab.profile.models import (
    BasisCoordinates,
    GateDecision,
    InferenceProfile,
    TraceStats,
)

# Slack for statistics that are averages of values in [0, 1]
_UNIT_SLACK = 1e-12


def _as_distribution(dist: Sequence[float] | np.ndarray) -> np.ndarray:
    p = np.asarray(dist, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ContractError("distribution must be a non-empty vector")
    if np.any(~np.isfinite(p)) or np.any(p < 0):
        raise ContractError("distribution entries must be finite and >= 0")
    total = p.sum()
    if total <= 0:
        raise ContractError("distribution needs at least one positive entry")
    if abs(total - 1.0) > 1e-9:
        raise ContractError(f"distribution sums to {total!r}, expected 1")
    return p


# ============================================================
# Reference (R)
# ============================================================

def externalizability_score(c: float, alpha: float) -> float:
    """exp(-alpha · c): 1 for free-to-share grounds, towards 0 for tacit ones."""
    if c < 0 or math.isnan(c):
        raise ContractError(f"description cost must be >= 0, got {c}")
    if not alpha > 0:
        raise ContractError(f"alpha must be > 0, got {alpha}")
    return math.exp(-alpha * c)


def externalizability_scores(grounds: Sequence[Ground], alpha: float) -> np.ndarray:
    if not alpha > 0:
        raise ContractError(f"alpha must be > 0, got {alpha}")
    costs = np.array([g.description_cost for g in grounds], dtype=float)
    return np.exp(-alpha * costs)


def reference_weights(grounds: Sequence[Ground], profile: InferenceProfile) -> np.ndarray:
    """Softmax weights over β_R · x_i + u_i.

    Args:
        grounds: Non-empty list of grounds.
        profile: Supplies alpha and beta_r.

    Returns:
        Positive weights summing to 1, aligned with ``grounds``.
    """
    if len(grounds) == 0:
        raise ContractError("reference_weights needs at least one ground")
    x = externalizability_scores(grounds, profile.alpha)
    u = np.array([g.compatibility for g in grounds], dtype=float)
    return softmax(profile.beta_r * x + u)


# ============================================================
# Exploration (E)
# ============================================================

def temper(
    dist: Sequence[float] | np.ndarray,
    temperature: float,
    *,
    check: bool = True,
) -> np.ndarray:
    """Return p^(1/T) renormalised.

    T = 1 is the identity. As T -> 0+ the result tends to the argmax, with
    exact ties sharing the mass equally. ``check=False`` skips validating
    ``dist`` for callers that already hold a normalised posterior.
    """
    if not temperature > 0:
        raise ContractError(f"temperature must be > 0, got {temperature}")
    p = _as_distribution(dist) if check else np.asarray(dist, dtype=float)
    if temperature == 1.0:
        return p / p.sum()

    with np.errstate(divide="ignore"):
        log_p = np.log(p)
    # shifting by the max keeps the argmax entries at exactly 0 for tiny T
    scaled = (log_p - log_p.max()) / temperature
    return softmax(scaled)


def hypothesis_entropy(dist: Sequence[float] | np.ndarray, *, check: bool = True) -> float:
    """Shannon entropy in nats with 0·log 0 = 0."""
    p = _as_distribution(dist) if check else np.asarray(dist, dtype=float)
    return float(entr(p).sum())


def normalized_entropy(dist: Sequence[float] | np.ndarray) -> float:
    """Entropy divided by log|H|; 0 for a single hypothesis."""
    p = _as_distribution(dist)
    if p.size == 1:
        return 0.0
    return min(1.0, hypothesis_entropy(p, check=False) / math.log(p.size))


# ============================================================
# Stabilization (S)
# ============================================================

def stabilization_gate(delta_eta: float, tau: float) -> GateDecision:
    """Update iff delta_eta > tau (strict)."""
    if delta_eta < 0 or math.isnan(delta_eta):
        raise ContractError(f"delta_eta must be >= 0, got {delta_eta}")
    return GateDecision.UPDATE if delta_eta > tau else GateDecision.HOLD


# ============================================================
# Horizon (D)
# ============================================================

def discounted_value(stream: Sequence[float] | np.ndarray, gamma: float) -> float:
    """Σ_t gamma^t · stream[t], with gamma^0 = 1 even when gamma = 0."""
    values = np.asarray(stream, dtype=float)
    if values.size == 0:
        raise ContractError("utility stream must not be empty")
    if not 0.0 <= gamma <= 1.0:
        raise ContractError(f"gamma must lie in [0, 1], got {gamma}")
    return float(np.dot(discount_factors(values.size, gamma), values))


def discount_factors(length: int, gamma: float) -> np.ndarray:
    # numpy defines 0.0 ** 0 as 1.0
    return np.power(float(gamma), np.arange(length, dtype=float))


# ============================================================
# Projection onto the three bases
# ============================================================

def _unit(name: str, value: float) -> float:
    if math.isnan(value) or value < -_UNIT_SLACK or value > 1.0 + _UNIT_SLACK:
        raise ContractError(f"{name} must lie in [0, 1], got {value}")
    return min(1.0, max(0.0, value))


def project_to_bases(profile: InferenceProfile, stats: TraceStats) -> BasisCoordinates:
    """Map a profile and its run statistics to (externalization, order, abstraction).

    externalization = mean weighted externalizability
    order           = (hold_rate + (1 - normalized entropy)) / 2
    abstraction     = gamma
    """
    x_bar = _unit("mean_externalization", stats.mean_externalization)
    h_norm = _unit("mean_entropy", stats.mean_entropy)
    hold = _unit("hold_rate", stats.hold_rate)
    return BasisCoordinates(
        externalization=x_bar,
        order=(hold + (1.0 - h_norm)) / 2.0,
        abstraction=profile.gamma,
    )

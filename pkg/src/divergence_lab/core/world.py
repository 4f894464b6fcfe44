"""Probabilistic queries on a world model: emission, posterior, predictive.

All posterior arithmetic runs in log space and is normalised with
``scipy.special.softmax`` (max-shifted exponentiation).
"""

from collections.abc import Sequence

import numpy as np
from scipy.special import softmax

from divergence_lab.core.models import LatentState, Observation, WorldModel
from divergence_lab.errors import ContractError


def emission_prob(model: WorldModel, hypothesis_id: str, symbol: str) -> float:
    """Smoothed probability of ``symbol`` under ``hypothesis_id``.

    Returns:
        (count[h][s] + smoothing) / Σ_s' (count[h][s'] + smoothing).
    """
    i = model.hypothesis_index(hypothesis_id)
    j = model.symbol_index(symbol)
    row = model.emission_counts[i]
    return (row[j] + model.smoothing) / (sum(row) + model.smoothing * len(row))


def weighted_posterior(
    model: WorldModel,
    obs: Observation,
    weights: Sequence[float] | np.ndarray,
) -> LatentState:
    """Posterior under weight-scaled log-likelihood.

    log posterior(h) = log prior(h) + Σ_i w_i · N · log p(s_i | h) + const,
    with N the number of grounds. Uniform weights reproduce ordinary Bayes.

    Args:
        model: World model supplying prior and emission table.
        obs: Observation whose grounds are scored.
        weights: Non-negative weights aligned 1:1 with ``obs.grounds``.

    Returns:
        Normalised posterior at ``obs.step``.
    """
    w = np.asarray(weights, dtype=float)
    n = len(obs.grounds)
    if w.shape != (n,):
        raise ContractError(f"{w.size} weights for {n} grounds")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-9:
        raise ContractError("weights must be non-negative and sum to 1")

    columns = [model.symbol_index(s) for s in obs.symbols]
    log_emission = np.log(model.emission_matrix()[:, columns])  # (|H|, N)

    with np.errstate(divide="ignore"):
        log_prior = np.log(np.asarray(model.prior, dtype=float))
    log_post = log_prior + n * (log_emission @ w)
    post = softmax(log_post)
    return LatentState(
        hypotheses=model.hypotheses,
        posterior=tuple(float(p) for p in post),
        step=obs.step,
    )


def predictive_vector(model: WorldModel, state: LatentState) -> np.ndarray:
    """Posterior-mixture distribution over every symbol of the model."""
    if state.hypotheses != model.hypotheses:
        raise ContractError("latent state ranges over different hypotheses than the model")
    return state.as_array() @ model.emission_matrix()


def predictive_distribution(model: WorldModel, state: LatentState, symbol: str) -> float:
    """Σ_h posterior(h) · p(symbol | h)."""
    j = model.symbol_index(symbol)
    return float(predictive_vector(model, state)[j])

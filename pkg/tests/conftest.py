"""Shared fixtures: toy hypothesis spaces, models and scenario documents."""

import copy
import json

import pytest

from divergence_lab.config import set_config
from divergence_lab.core.models import Hypothesis, HypothesisSpace, WorldModel
from divergence_lab.scenario.loader import load_bundled

TOY_SCENARIO = {
    "name": "toy",
    "description": "Two symbols, two hypotheses, two agents.",
    "symbols": ["s1", "s2"],
    "hypotheses": [
        {"id": "h1", "outcome_streams": {"act": [1.0, 1.0], "wait": [0.0, 2.0]}},
        {"id": "h2", "outcome_streams": {"act": [0.0, 0.0], "wait": [1.0, 0.0]}},
    ],
    "actions": [{"id": "act"}, {"id": "wait"}],
    "environment": {
        "active_regime": "base",
        "bundle_size": 3,
        "regimes": {
            "base": {"probabilities": {"s1": 0.6, "s2": 0.4}},
            "alt": {"probabilities": {"s1": 0.2, "s2": 0.8}, "realizes": "h2"},
        },
        "catalog": {
            "s1": {"description_cost": 0.2},
            "s2": {"description_cost": 1.5},
        },
        "interventions": {
            "stay": {"regime": "base"},
            "shift": {"regime": "alt"},
        },
    },
    "agents": [
        {
            "id": "a",
            "exposure_k": 2,
            "profile": {"beta_r": 2.0, "temperature": 1.0, "tau": 0.01, "gamma": 0.9},
            "model": {
                "prior": {"h1": 0.5, "h2": 0.5},
                "emission_counts": {"h1": {"s1": 3.0, "s2": 1.0}, "h2": {"s1": 1.0, "s2": 3.0}},
            },
        },
        {
            "id": "b",
            "exposure_k": 2,
            "profile": {"beta_r": 0.5, "temperature": 1.5, "tau": 0.05, "gamma": 0.5},
            "model": {
                "prior": {"h1": 0.5, "h2": 0.5},
                "emission_counts": {"h1": {"s1": 3.0, "s2": 1.0}, "h2": {"s1": 1.0, "s2": 3.0}},
            },
        },
    ],
    "run": {"steps": 20, "seed": 7, "delta": 0.01, "horizon": 2},
}


@pytest.fixture(autouse=True)
def fresh_config(monkeypatch):
    """Every test starts from default configuration, ignoring the caller's env."""
    for name in (
        "DIVLAB_STEPS",
        "DIVLAB_SEED",
        "DIVLAB_DELTA",
        "DIVLAB_HORIZON",
        "DIVLAB_OUT_DIR",
        "DIVLAB_MAX_WORKERS",
        "DIVLAB_LOG_LEVEL",
    ):
        monkeypatch.delenv(name, raising=False)
    set_config(None)
    yield
    set_config(None)


@pytest.fixture
def toy_data() -> dict:
    """A fresh, mutable copy of the toy scenario document."""
    return copy.deepcopy(TOY_SCENARIO)


@pytest.fixture
def toy_file(tmp_path, toy_data):
    path = tmp_path / "toy.json"
    path.write_text(json.dumps(toy_data), encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def ai_scenario():
    return load_bundled("ai_regulation")


@pytest.fixture
def two_by_two_space() -> HypothesisSpace:
    """h1 favours 'act', h2 favours 'wait'."""
    return HypothesisSpace(
        hypotheses=(
            Hypothesis(id="h1", outcome_streams={"act": (1.0, 1.0), "wait": (0.0, 0.0)}),
            Hypothesis(id="h2", outcome_streams={"act": (0.0, 0.0), "wait": (1.0, 1.0)}),
        )
    )


def make_model(space: HypothesisSpace, counts, prior=None, symbols=("s1", "s2"), smoothing=1.0):
    n_h = len(space.hypotheses)
    return WorldModel(
        space=space,
        symbols=tuple(symbols),
        prior=tuple(prior) if prior is not None else tuple([1.0 / n_h] * n_h),
        emission_counts=tuple(tuple(float(c) for c in row) for row in counts),
        smoothing=smoothing,
    )

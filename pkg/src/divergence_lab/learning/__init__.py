"""W-level learning - biased exposure, gated updates and episode traces."""

from divergence_lab.learning.agent import (
    Agent,
    UpdateRecord,
    expose,
    model_distance,
    sample_exposure,
    update_model,
)
from divergence_lab.learning.environment import (
    CatalogEntry,
    Environment,
    Intervention,
    Regime,
    emit_bundle,
)
from divergence_lab.learning.episode import (
    EpisodeSource,
    SimulationTrace,
    StepRecord,
    run_agents,
    run_episode,
    trace_stats,
)
from divergence_lab.learning.rng import ENVIRONMENT_STREAM, derive_rng

__all__ = [
    # Agents
    "Agent",
    "UpdateRecord",
    "expose",
    "model_distance",
    "sample_exposure",
    "update_model",
    # Environment
    "CatalogEntry",
    "Environment",
    "Intervention",
    "Regime",
    "emit_bundle",
    # Episodes
    "EpisodeSource",
    "SimulationTrace",
    "StepRecord",
    "run_agents",
    "run_episode",
    "trace_stats",
    # Random streams
    "ENVIRONMENT_STREAM",
    "derive_rng",
]

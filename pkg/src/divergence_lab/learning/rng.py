"""Named, reproducible random streams derived from one run seed."""

import hashlib

import numpy as np

from divergence_lab.errors import ContractError

ENVIRONMENT_STREAM = "environment"


def stream_key(label: str) -> int:
    """Stable 64-bit key for a stream label."""
    return int.from_bytes(hashlib.sha256(label.encode("utf-8")).digest()[:8], "big")


def derive_rng(seed: int, label: str) -> np.random.Generator:
    """Generator for stream ``label`` of run ``seed``.

    Equal (seed, label) pairs always give identical draw sequences; distinct
    labels give independent streams.
    """
    if seed < 0:
        raise ContractError(f"seed must be a non-negative integer, got {seed}")
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(stream_key(label),))
    return np.random.default_rng(sequence)

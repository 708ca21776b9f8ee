"""Seed-derived random streams.

Every stochastic component draws from a Generator derived from the root
seed plus an integer key path, so trials scheduled in parallel produce
bit-identical results to a serial run.
"""

from __future__ import annotations

import numpy as np


def substream(seed: int, *key: int) -> np.random.Generator:
    """Generator for the stream identified by (seed, key path)."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))

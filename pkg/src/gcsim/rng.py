"""Named, independent RNG substreams derived from one master seed.

Every stochastic component draws from its own lane so that adding or removing
schemes, runs, or iterations never perturbs the draws of another lane. Lanes
are identified by a fixed integer tag plus optional indices (run, iteration,
cluster id), mapped onto numpy's SeedSequence spawn keys.
"""

from __future__ import annotations

import numpy as np

LANE_MATRIX = 0
LANE_DATASET = 1
LANE_CODE = 2
LANE_TRACE = 3
LANE_LATENCY = 4


def substream(seed: int, *key: int) -> np.random.Generator:
    """Generator for the lane identified by ``key`` under ``seed``."""
    ss = np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))

"""
Random stream helpers

Every run has one named seed; independent sub-streams are derived by
counter-based splitting: stream (k, j...) of seed s is
SeedSequence(s, spawn_key=(k, j...)).
"""

import numpy as np

CHANNEL_STREAM = 0
DROP_STREAM = 1
IDLE_STREAM = 2
# Cellular drop d samples its channel from stream (CELLULAR_CHANNEL_STREAM, d)
CELLULAR_CHANNEL_STREAM = 3
# Replication r uses stream REPLICATION_BASE + r
REPLICATION_BASE = 1000


def make_rng(seed: int, stream: int = CHANNEL_STREAM, *substream: int) -> np.random.Generator:
    """Generator for sub-stream (stream, *substream) of `seed`"""
    if seed < 0:
        raise ValueError(f"Seed must be non-negative, got {seed}")
    key = (int(stream),) + tuple(int(s) for s in substream)
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=key))

"""Seeding conventions: one counter-based generator family (Philox).

Every stochastic operation takes an explicit integer seed.  Ensembles derive
per-replica substreams from (seed, index path), so results never depend on
worker count or scheduling order.
"""

import numpy as np


def substream(seed: int, *path: int) -> np.random.Generator:
    """Generator for the Philox stream keyed by (seed, *path).

    Distinct paths give statistically independent streams; the same
    (seed, path) always yields the same stream.
    """
    entropy = [int(seed)] + [int(p) for p in path]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))

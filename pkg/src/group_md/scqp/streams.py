"""
Independent seeded random streams

Operator construction, optimum planting and gradient noise each draw from
their own stream, so changing one (e.g. the SNR) never perturbs another.
"""
import numpy as np

OPERATOR_STREAM = 0
PLANTING_STREAM = 1
NOISE_STREAM = 2


def stream_rng(seed: int, stream: int) -> np.random.Generator:
    """Generator keyed by (seed, stream id)"""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(stream)]))

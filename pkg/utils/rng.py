"""
Seed derivation helpers

All randomness flows from a master seed through numpy SeedSequence
spawn keys, so any (scenario cell, trial, iteration) can be replayed
from its coordinates alone.
"""

from typing import List

import numpy as np


def derive_seed(master_seed: int, *coordinates: int) -> int:
    """
    Derive a child seed from a master seed and integer coordinates

    Args:
        master_seed: Non-negative master seed
        *coordinates: Non-negative integers (trial index, iteration, ...)

    Returns:
        64-bit child seed, stable across platforms and numpy versions
    """
    sequence = np.random.SeedSequence(
        entropy=int(master_seed), spawn_key=tuple(int(c) for c in coordinates)
    )
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed))


def spawn_seeds(master_seed: int, count: int, *prefix: int) -> List[int]:
    """Seeds for `count` independent trials under a common prefix"""
    return [derive_seed(master_seed, *prefix, i) for i in range(count)]


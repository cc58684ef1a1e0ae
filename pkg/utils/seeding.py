"""
Deterministic seed derivation for independent random streams
"""

from typing import List

import numpy as np


def derive_seed(*keys: int) -> int:
    """Stable 32-bit seed from a tuple of nonnegative integer keys"""
    return int(np.random.SeedSequence([int(k) for k in keys]).generate_state(1)[0])


def make_rng(*keys: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(k) for k in keys]))


def spawn_seeds(seed: int, count: int) -> List[int]:
    """count distinct 32-bit seeds derived from one master seed"""
    return [int(s) for s in np.random.SeedSequence(int(seed)).generate_state(count)] if count else []

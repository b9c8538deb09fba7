"""Counter-based random streams keyed by explicit integer tuples.

Every randomized operation in the package derives its generator from
(seed, *context) through a SeedSequence feeding Philox, a counter-based
generator with a published algorithm. Identical inputs give identical
streams across runs, platforms, and schedules.
"""

from __future__ import annotations

import numpy as np

from .core import DataError


def check_seed(seed: int) -> int:
    """Seeds are non-negative integers."""
    s = int(seed)
    if s < 0:
        raise DataError(f"seed must be non-negative, got {seed}")
    return s


def make_rng(*seed_parts: int) -> np.random.Generator:
    """Generator for the stream keyed by the given integer tuple."""
    parts = [check_seed(p) for p in seed_parts]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(parts)))


def child_seed(*seed_parts: int) -> int:
    """Collapse a seed tuple to a single integer for APIs taking one seed."""
    parts = [check_seed(p) for p in seed_parts]
    return int(np.random.SeedSequence(parts).generate_state(1, np.uint64)[0])

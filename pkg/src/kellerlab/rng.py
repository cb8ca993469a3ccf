"""Counter-based random streams.

Every stochastic routine in the lab draws from a Philox generator whose
128-bit key is set directly from (seed, salt, index).  Streams are therefore
independent, reproducible, and independent of how work is partitioned across
workers: the same (seed, index) always yields the same numbers.
"""

from __future__ import annotations

import numpy as np

# Salt constants keep streams from distinct subsystems disjoint even under
# equal (seed, index).
SALT_FIBER_TRIALS = 1
SALT_VOLUME = 2
SALT_CHARSET = 3
SALT_WORDS = 4

_MASK64 = (1 << 64) - 1


def stream(seed: int, salt: int, index: int = 0) -> np.random.Generator:
    """Generator keyed by (seed, salt, index); no sequential seeding."""
    if seed < 0:
        raise ValueError("seed must be an unsigned integer")
    key = np.array([seed & _MASK64, ((salt & 0xFFFF) << 48) ^ (index & _MASK64)],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))

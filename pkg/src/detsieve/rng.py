"""Seeded random streams.

Every random draw comes from a Philox counter-based generator keyed by the
run seed and a task path, so results do not depend on scheduling.
"""

from __future__ import annotations

import numpy as np

DEFAULT_SEED = 20240531


def stream(seed: int, *path: int) -> np.random.Generator:
    """Independent generator for task ``path`` under ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *path])))


def entropy_seed() -> int:
    """A fresh seed from OS entropy."""
    return int(np.random.SeedSequence().entropy % (1 << 63))

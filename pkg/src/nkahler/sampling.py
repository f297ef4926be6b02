"""Deterministic random streams.

Every check draws from its own stream, derived from the root seed and the
check's name: ``SeedSequence([root_seed, crc32(name)])``.  Reports therefore
do not depend on the order in which checks run.
"""

from __future__ import annotations

import zlib

import numpy as np


def rng_for(seed: int, name: str) -> np.random.Generator:
    key = zlib.crc32(name.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence([int(seed), key]))


def unit_vectors(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    v = rng.standard_normal((n, dim))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)

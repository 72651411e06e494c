"""Named, seedable random streams.

Every random draw in the package goes through a ``numpy.random.Generator``
derived from a master seed plus a tuple of integer or string keys, so that
any trial can be regenerated in isolation.
"""
from __future__ import annotations

import zlib

import numpy as np


def _key_to_int(key) -> int:
    if isinstance(key, (int, np.integer)):
        if key < 0:
            raise ValueError("stream keys must be non-negative")
        return int(key)
    return zlib.crc32(str(key).encode("utf-8"))


def stream(seed: int, *keys) -> np.random.Generator:
    """Return an independent generator for ``(seed, *keys)``."""
    entropy = [int(seed)] + [_key_to_int(k) for k in keys]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        raise ValueError("an explicit seed or Generator is required")
    return stream(int(rng))

"""Readout confusion-matrix noise and stochastic noise inversion."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class ReadoutProfile:
    """Per-bit confusion matrices, ``calib[i][m, t] = P(measure m | true t)``."""

    calib: np.ndarray = field(repr=False)

    def __post_init__(self):
        calib = np.asarray(self.calib, dtype=float)
        if calib.ndim != 3 or calib.shape[1:] != (2, 2):
            raise ValidationError(f"calibration must have shape (m, 2, 2), got {calib.shape}")
        if np.any(calib < -1e-12) or np.any(calib > 1 + 1e-12):
            raise ValidationError("confusion-matrix entries must lie in [0, 1]")
        if not np.allclose(calib.sum(axis=1), 1.0, atol=1e-9):
            raise ValidationError("confusion-matrix columns must sum to 1")
        calib = calib.copy()
        calib.flags.writeable = False
        object.__setattr__(self, "calib", calib)

    @property
    def width(self) -> int:
        return self.calib.shape[0]

    @classmethod
    def identity(cls, width: int) -> "ReadoutProfile":
        return cls(np.broadcast_to(np.eye(2), (width, 2, 2)))

    @classmethod
    def symmetric(cls, flip_probs) -> "ReadoutProfile":
        e = np.asarray(flip_probs, dtype=float)
        calib = np.empty((len(e), 2, 2))
        calib[:, 0, 0] = calib[:, 1, 1] = 1 - e
        calib[:, 0, 1] = calib[:, 1, 0] = e
        return cls(calib)

    @classmethod
    def uniform(cls, width: int, flip: float) -> "ReadoutProfile":
        return cls.symmetric(np.full(width, flip))

    @classmethod
    def random_hardware_like(cls, width: int, rng, low=0.03, high=0.07) -> "ReadoutProfile":
        return cls.symmetric(rng.uniform(low, high, size=width))

    def flip_probabilities(self) -> np.ndarray:
        """``(width, 2)`` array of P(flip | true bit)."""
        return np.stack([self.calib[:, 1, 0], self.calib[:, 0, 1]], axis=1)

    def to_json(self) -> list:
        return [m.tolist() for m in self.calib]

    @classmethod
    def from_json(cls, obj) -> "ReadoutProfile":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(np.array(obj, dtype=float))


def apply_readout_noise(bits, profile: ReadoutProfile, rng: np.random.Generator) -> np.ndarray:
    """Flip each bit independently with probability 1 - calib[i][b, b].

    ``bits`` may be a single row or a 2D batch; the last axis is the bit index.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.shape[-1] != profile.width:
        raise ValidationError(f"profile covers {profile.width} bits, data has {bits.shape[-1]}")
    flip_p = profile.flip_probabilities()[np.arange(profile.width), bits]
    flips = rng.random(bits.shape) < flip_p
    return bits ^ flips.astype(np.uint8)


@dataclass(frozen=True)
class ExpandedData:
    rows: np.ndarray  # (R * inverse_cnt, width) uint8
    coefficients: np.ndarray  # (R * inverse_cnt,) float


def noise_inversion(data, profile: ReadoutProfile, inverse_cnt: int = 20, rng=None) -> ExpandedData:
    """Expand each row into ``inverse_cnt`` randomly re-flipped replicas.

    Follows the published pseudo-code: for a measured 0 the keep-probability is
    ``calib[i][1, 1]``, for a measured 1 it is ``calib[i][0, 0]``; every flip
    negates the replica's coefficient.
    """
    if inverse_cnt < 1:
        raise ValidationError("inverse_cnt must be >= 1")
    data = np.atleast_2d(np.asarray(data, dtype=np.uint8))
    if data.shape[1] != profile.width:
        raise ValidationError(f"profile covers {profile.width} bits, data has {data.shape[1]}")
    if rng is None:
        raise ValidationError("noise_inversion needs a random stream")
    keep = np.where(data == 0, profile.calib[:, 1, 1], profile.calib[:, 0, 0])
    rows = np.repeat(data, inverse_cnt, axis=0)
    keep = np.repeat(keep, inverse_cnt, axis=0)
    flips = rng.random(rows.shape) >= keep
    coefficients = np.where(flips.sum(axis=1) % 2 == 0, 1.0, -1.0)
    return ExpandedData(rows ^ flips.astype(np.uint8), coefficients)

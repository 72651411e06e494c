"""Randomized single-qubit Pauli measurements (classical shadows) as the conventional baseline."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ensemble import EnsembleSpec, sample_states
from .errors import InvalidDimensionError, InvalidTaskError, ValidationError
from .noise import ReadoutProfile, apply_readout_noise
from .pauli import PauliString


@dataclass
class ShadowDataset:
    bases: np.ndarray  # (N, n) int8 letters in 1..3
    bits: np.ndarray  # (N, n) uint8; bit 0 means eigenvalue +1
    spec: EnsembleSpec | None = None
    seed: int | None = None
    noise: ReadoutProfile | None = field(default=None, repr=False)

    def __post_init__(self):
        self.bases = np.asarray(self.bases, dtype=np.int8)
        self.bits = np.asarray(self.bits, dtype=np.uint8)
        if self.bases.shape != self.bits.shape or self.bases.ndim != 2:
            raise ValidationError("bases and outcome bits must be equal-shape 2D arrays")
        if self.bases.size and (self.bases.min() < 1 or self.bases.max() > 3):
            raise ValidationError("snapshot bases must be X, Y or Z")

    @property
    def n(self) -> int:
        return self.bases.shape[1]

    @property
    def size(self) -> int:
        return self.bases.shape[0]

    @property
    def outcomes(self) -> np.ndarray:
        """Eigenvalues +-1."""
        return 1 - 2 * self.bits.astype(np.int8)


def measure_pauli_bases(letters, signs, bases, rng) -> np.ndarray:
    """Measure eigenstates (letters, signs) in ``bases``; returns bits (0 = +1)."""
    agree = letters == bases
    random_bits = rng.integers(0, 2, size=letters.shape, dtype=np.uint8)
    return np.where(agree, (1 - signs) // 2, random_bits).astype(np.uint8)


def run_conventional(
    spec: EnsembleSpec,
    n_exp: int,
    noise: ReadoutProfile | None = None,
    rng: np.random.Generator | None = None,
    seed: int | None = None,
) -> ShadowDataset:
    """One fresh copy per experiment, each qubit measured in a uniform X/Y/Z basis."""
    if n_exp < 1:
        raise ValidationError("N must be >= 1")
    if rng is None:
        raise ValidationError("run_conventional needs a random stream")
    letters, signs = sample_states(spec, n_exp, rng)
    bases = rng.integers(1, 4, size=letters.shape, dtype=np.int8)
    bits = measure_pauli_bases(letters, signs, bases, rng)
    if noise is not None:
        if noise.width != spec.n:
            raise ValidationError(f"noise profile must cover {spec.n} bits")
        bits = apply_readout_noise(bits, noise, rng)
    return ShadowDataset(bases, bits, spec=spec, seed=seed, noise=noise)


def snapshot_terms(data: ShadowDataset, o: PauliString) -> np.ndarray:
    """Single-snapshot estimates 3^|O| * prod(outcomes) when bases match on supp(O), else 0."""
    if o.n != data.n:
        raise InvalidDimensionError(f"observable has {o.n} qubits, data has {data.n}")
    support = np.flatnonzero(o.codes)
    if support.size == 0:
        return np.ones(data.size)
    match = (data.bases[:, support] == o.codes[support]).all(axis=1)
    parity = data.bits[:, support].sum(axis=1) & 1
    return np.where(match, (3.0 ** support.size) * (1 - 2 * parity.astype(float)), 0.0)


def shadow_estimate(data: ShadowDataset, o: PauliString) -> float:
    """Unbiased estimate of tr(O rho)."""
    if data.size == 0:
        raise ValidationError("empty dataset")
    return float(snapshot_terms(data, o).mean())


def compare_observables_conventional(data: ShadowDataset, o1: PauliString, o2: PauliString) -> int:
    if o1.n != o2.n:
        raise InvalidDimensionError("observables differ in length")
    if o1 == o2:
        raise InvalidTaskError("the two observables must differ")
    e1, e2 = abs(shadow_estimate(data, o1)), abs(shadow_estimate(data, o2))
    return 1 if e1 >= e2 else 2

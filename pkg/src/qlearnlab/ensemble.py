"""Random product-state preparation of rho = (I + alpha P) / 2^n.

Every qubit of a sample is a Pauli eigenstate, stored compactly as a
(letter, sign) pair; computational-basis states are Z eigenstates.  The
hidden correlation lives entirely in the sign of the last non-identity qubit.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpecError, ResourceLimitError
from .pauli import EIGENSTATES, PauliLetter, PauliString

_Z = int(PauliLetter.Z)


@dataclass(frozen=True)
class EnsembleSpec:
    pauli: PauliString
    alpha: float = 0.95

    def __post_init__(self):
        if not -1.0 < self.alpha < 1.0:
            raise InvalidSpecError(f"|alpha| must be < 1, got {self.alpha}")
        if self.pauli.is_identity():
            raise InvalidSpecError("the planted Pauli must not be the identity")

    @property
    def n(self) -> int:
        return self.pauli.n

    @property
    def last_support(self) -> int:
        """Largest qubit index on which the planted Pauli is not I."""
        return int(np.flatnonzero(self.pauli.codes)[-1])

    def to_json(self) -> dict:
        return {"n": self.n, "pauli": str(self.pauli), "alpha": self.alpha}

    @classmethod
    def from_json(cls, obj) -> "EnsembleSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        spec = cls(PauliString.from_str(obj["pauli"]), float(obj["alpha"]))
        if "n" in obj and int(obj["n"]) != spec.n:
            raise InvalidSpecError("n does not match the Pauli string length")
        return spec


@dataclass(frozen=True)
class ProductStateSample:
    letters: np.ndarray  # (n,) int8, 1..3
    signs: np.ndarray  # (n,) int8, +-1

    @property
    def n(self) -> int:
        return len(self.letters)

    @property
    def qubits(self) -> list[np.ndarray]:
        return [EIGENSTATES[l, (1 - s) // 2].copy() for l, s in zip(self.letters, self.signs)]

    def statevector(self) -> np.ndarray:
        out = np.array([1.0 + 0j])
        for q in self.qubits:
            out = np.kron(out, q)
        return out


def sample_states(spec: EnsembleSpec, size: int, rng: np.random.Generator):
    """Draw ``size`` independent preparations.

    Returns ``(letters, signs)``, two int8 arrays of shape ``(size, n)``.
    """
    codes = spec.pauli.codes
    n = spec.n
    last = spec.last_support
    letters = np.where(codes == 0, _Z, codes).astype(np.int8)
    letters = np.broadcast_to(letters, (size, n)).copy()
    signs = (1 - 2 * rng.integers(0, 2, size=(size, n))).astype(np.int8)

    eta = np.full(size, 1 if spec.alpha >= 0 else -1, dtype=np.int8)
    for i in range(last):
        if codes[i]:
            eta *= signs[:, i]
    # last support qubit: computational basis w.p. 1-|alpha|, else eta-eigenstate
    faithful = rng.random(size) < abs(spec.alpha)
    letters[:, last] = np.where(faithful, codes[last], _Z)
    signs[:, last] = np.where(faithful, eta, signs[:, last])
    return letters, signs


def sample_state(spec: EnsembleSpec, rng: np.random.Generator) -> ProductStateSample:
    letters, signs = sample_states(spec, 1, rng)
    return ProductStateSample(letters[0], signs[0])


def enumerate_branches(spec: EnsembleSpec):
    """All outcomes of the preparation with their probabilities.

    Yields ``(probability, ProductStateSample)``.  Exponential in n; intended
    for small-n oracles.
    """
    codes = spec.pauli.codes
    n = spec.n
    last = spec.last_support
    a = abs(spec.alpha)
    eta0 = 1 if spec.alpha >= 0 else -1
    free = [i for i in range(n) if i != last]
    for free_signs in itertools.product((1, -1), repeat=len(free)):
        letters = np.where(codes == 0, _Z, codes).astype(np.int8)
        signs = np.ones(n, dtype=np.int8)
        eta = eta0
        for i, s in zip(free, free_signs):
            signs[i] = s
            if codes[i] and i < last:
                eta *= s
        p_free = 0.5 ** len(free)
        for s in (1, -1):
            lz, sz = letters.copy(), signs.copy()
            lz[last], sz[last] = _Z, s
            yield p_free * (1 - a) / 2, ProductStateSample(lz, sz)
        lf, sf = letters.copy(), signs.copy()
        sf[last] = eta
        yield p_free * a, ProductStateSample(lf, sf)


def exact_density(spec: EnsembleSpec) -> np.ndarray:
    """(I + alpha P) / 2^n as a dense matrix."""
    if spec.n > 10:
        raise ResourceLimitError("exact_density is limited to n <= 10")
    d = 2**spec.n
    return (np.eye(d) + spec.alpha * spec.pauli.to_matrix()) / d

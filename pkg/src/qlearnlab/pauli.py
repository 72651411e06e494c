"""Pauli strings, single-qubit Pauli eigenstates and the Bell/Pauli correspondence.

Letters are encoded as small integers ``I=0, X=1, Y=2, Z=3`` (which is also the
canonical ordering).  A :class:`PauliString` stores its letters as two packed
bit-vectors (x-bits and z-bits) held in Python ints, so equality and hashing
are O(1) word operations for the qubit counts used here.
"""
from __future__ import annotations

import enum
from functools import cached_property

import numpy as np

from .errors import InvalidDimensionError, ValidationError


class PauliLetter(enum.IntEnum):
    I = 0
    X = 1
    Y = 2
    Z = 3

    @property
    def xz(self) -> tuple[int, int]:
        return _LETTER_XZ[self]


_LETTER_XZ = {0: (0, 0), 1: (1, 0), 2: (1, 1), 3: (0, 1)}
_XZ_LETTER = {v: k for k, v in _LETTER_XZ.items()}

PAULI_MATRICES = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


class PauliString:
    """An n-qubit tensor product of {I, X, Y, Z} without a phase."""

    def __init__(self, x_bits: int, z_bits: int, n: int):
        if n < 1:
            raise InvalidDimensionError(f"Pauli string needs n >= 1, got {n}")
        mask = (1 << n) - 1
        if x_bits & ~mask or z_bits & ~mask:
            raise ValidationError("bit-vectors wider than n")
        self._n = n
        self._x = x_bits
        self._z = z_bits

    @classmethod
    def from_letters(cls, letters) -> "PauliString":
        letters = [PauliLetter(int(c)) for c in letters]
        x = z = 0
        for i, letter in enumerate(letters):
            xb, zb = letter.xz
            x |= xb << i
            z |= zb << i
        return cls(x, z, len(letters))

    @classmethod
    def from_str(cls, text: str) -> "PauliString":
        try:
            return cls.from_letters(PauliLetter[c] for c in text.strip().upper())
        except KeyError as exc:
            raise ValidationError(f"invalid Pauli letter in {text!r}") from exc

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(0, 0, n)

    @property
    def n(self) -> int:
        return self._n

    @property
    def x_bits(self) -> int:
        return self._x

    @property
    def z_bits(self) -> int:
        return self._z

    def __len__(self) -> int:
        return self._n

    def __getitem__(self, i: int) -> PauliLetter:
        if i < 0:
            i += self._n
        if not 0 <= i < self._n:
            raise IndexError(i)
        return PauliLetter(_XZ_LETTER[((self._x >> i) & 1, (self._z >> i) & 1)])

    def __iter__(self):
        return (self[i] for i in range(self._n))

    @cached_property
    def codes(self) -> np.ndarray:
        """Letters as an int8 array (I=0, X=1, Y=2, Z=3)."""
        out = np.array([int(c) for c in self], dtype=np.int8)
        out.flags.writeable = False
        return out

    @property
    def weight(self) -> int:
        return bin(self._x | self._z).count("1")

    def is_identity(self) -> bool:
        return (self._x | self._z) == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return (self._n, self._x, self._z) == (other._n, other._x, other._z)

    def __hash__(self) -> int:
        return hash((self._n, self._x, self._z))

    def __lt__(self, other: "PauliString") -> bool:
        return (self._n, tuple(self)) < (other._n, tuple(other))

    def __str__(self) -> str:
        return "".join(c.name for c in self)

    def __repr__(self) -> str:
        return f"PauliString('{self}')"

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix; qubit 0 is the most significant tensor factor."""
        if self._n > 12:
            raise InvalidDimensionError("dense Pauli matrix only for n <= 12")
        out = np.array([[1.0 + 0j]])
        for c in self:
            out = np.kron(out, PAULI_MATRICES[c])
        return out


def sample_pauli_string(n: int, exclude_identity: bool, rng: np.random.Generator) -> PauliString:
    """Uniform draw over 4^n strings, or over the 4^n - 1 non-identity strings."""
    if n < 1:
        raise InvalidDimensionError(f"n must be >= 1, got {n}")
    while True:
        codes = rng.integers(0, 4, size=n)
        if not (exclude_identity and not codes.any()):
            return PauliString.from_letters(codes)


def sample_distinct_pauli(n: int, avoid: PauliString, rng: np.random.Generator) -> PauliString:
    """Uniform non-identity string different from ``avoid``."""
    while True:
        q = sample_pauli_string(n, True, rng)
        if q != avoid:
            return q


# -- single-qubit states ----------------------------------------------------------

_SQ2 = 1 / np.sqrt(2)

# EIGENSTATES[letter, (1 - sign) // 2]; the I row is the computational basis.
EIGENSTATES = np.array(
    [
        [[1, 0], [0, 1]],
        [[_SQ2, _SQ2], [_SQ2, -_SQ2]],
        [[_SQ2, 1j * _SQ2], [_SQ2, -1j * _SQ2]],
        [[1, 0], [0, 1]],
    ],
    dtype=complex,
)


def pauli_eigenstate(letter, sign: int) -> np.ndarray:
    """Eigenvector of the Pauli ``letter`` with eigenvalue ``sign``.

    For ``I`` the computational state |0> (sign +1) or |1> (sign -1) is returned.
    """
    if sign not in (1, -1):
        raise ValidationError(f"sign must be +1 or -1, got {sign}")
    return EIGENSTATES[int(letter), (1 - sign) // 2].copy()


def check_qubit_state(v, tol: float = 1e-9) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(2)
    if abs(np.vdot(v, v).real - 1.0) > tol:
        raise ValidationError("qubit state is not normalized")
    return v


# -- Bell basis -------------------------------------------------------------------


class BellOutcome(enum.IntEnum):
    """Bell states; the integer value is the 2-bit wire encoding."""

    PSI_PLUS = 0
    PSI_MINUS = 1
    PHI_PLUS = 2
    PHI_MINUS = 3

    @property
    def pauli(self) -> PauliLetter:
        return PauliLetter(BELL_TO_PAULI[self])

    @property
    def bits(self) -> str:
        return format(int(self), "02b")


# Psi+ <-> I, Psi- <-> Z, Phi+ <-> X, Phi- <-> Y
BELL_TO_PAULI = np.array([0, 3, 1, 2], dtype=np.int8)
PAULI_TO_BELL = np.argsort(BELL_TO_PAULI).astype(np.int8)

BELL_STATES = np.array(
    [
        [_SQ2, 0, 0, _SQ2],
        [_SQ2, 0, 0, -_SQ2],
        [0, _SQ2, _SQ2, 0],
        [0, _SQ2, -_SQ2, 0],
    ],
    dtype=complex,
)

# BELL_SIGNS[letter, outcome] = eigenvalue of (sigma x sigma) on the Bell state.
BELL_SIGNS = np.array(
    [
        [1, 1, 1, 1],
        [1, -1, 1, -1],
        [-1, 1, 1, -1],
        [1, 1, -1, -1],
    ],
    dtype=np.int8,
)


def bell_sign(letter, outcome) -> int:
    return int(BELL_SIGNS[int(letter), int(outcome)])

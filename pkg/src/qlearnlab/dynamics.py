"""Conventional and quantum-enhanced experiments on an unknown circuit.

The quantum-enhanced protocol (Bell pairs, U on the system, swap, U again,
pairwise Bell readout) is simulated through the identity
(U x U)|Omega> = (U U^T x I)|Omega>, so only an n-qubit unitary is needed:
the Bell string labelled by Pauli P occurs with probability
|tr(P U U^T)|^2 / 4^n.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bell import outcomes_to_bits
from .errors import ResourceLimitError, ValidationError
from .noise import ReadoutProfile, apply_readout_noise
from .pauli import BELL_TO_PAULI, PAULI_MATRICES
from .statevector import MAX_UNITARY_QUBITS, Circuit, circuit_unitary, simulate

CONVENTIONAL = "conventional"
QUANTUM_ENHANCED = "quantum_enhanced"

# S^dagger then H: maps the +1 (-1) eigenstate of Y to |0> (|1>).
Y_TO_Z = (np.array([[1, 1], [1, -1]]) / np.sqrt(2)) @ np.diag([1, -1j])


@dataclass(frozen=True)
class DynamicsExperimentConfig:
    n: int
    depth: int
    repetitions: int
    strategy: str
    noise: ReadoutProfile | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValidationError("repetitions must be >= 1")
        if self.strategy not in (CONVENTIONAL, QUANTUM_ENHANCED):
            raise ValidationError(f"unknown strategy {self.strategy!r}")

    @property
    def width(self) -> int:
        return self.n if self.strategy == CONVENTIONAL else 2 * self.n


@dataclass
class OutcomeMatrix:
    rows: np.ndarray  # (repetitions, width) uint8
    strategy: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=np.uint8)
        if self.rows.ndim != 2:
            raise ValidationError("outcome matrix must be 2D")

    @property
    def repetitions(self) -> int:
        return self.rows.shape[0]

    @property
    def width(self) -> int:
        return self.rows.shape[1]


def _index_bits(idx: np.ndarray, n: int) -> np.ndarray:
    shifts = np.arange(n - 1, -1, -1)
    return ((idx[:, None] >> shifts) & 1).astype(np.uint8)


def y_basis_probabilities(circuit: Circuit) -> np.ndarray:
    """Born distribution of the Y-basis readout of U|0^n>, indexed with qubit 0 as MSB."""
    psi = simulate(circuit).reshape((2,) * circuit.n)
    for q in range(circuit.n):
        psi = np.moveaxis(np.tensordot(Y_TO_Z, psi, axes=([1], [q])), 0, q)
    p = np.abs(psi.ravel()) ** 2
    return p / p.sum()


def _noisy(rows, noise, rng):
    if noise is None:
        return rows
    if noise.width != rows.shape[1]:
        raise ValidationError(f"noise profile covers {noise.width} bits, rows have {rows.shape[1]}")
    return apply_readout_noise(rows, noise, rng)


def run_conventional_dynamics(circuit: Circuit, cfg: DynamicsExperimentConfig, rng) -> OutcomeMatrix:
    if cfg.strategy != CONVENTIONAL:
        raise ValidationError("config strategy must be conventional")
    if circuit.n != cfg.n:
        raise ValidationError("circuit size does not match config")
    p = y_basis_probabilities(circuit)
    idx = rng.choice(p.size, size=cfg.repetitions, p=p)
    rows = _noisy(_index_bits(idx, circuit.n), cfg.noise, rng)
    return OutcomeMatrix(rows, CONVENTIONAL, _meta(circuit, cfg))


# W[s, 2r + c] = sigma_s[c, r], so contracting gives tr(sigma_s A) per qubit
_PAULI_TRACE = np.stack([PAULI_MATRICES[s].T.reshape(4) for s in range(4)])


def pauli_traces(m: np.ndarray) -> np.ndarray:
    """tr(P m) for every Pauli string P, as a rank-n tensor indexed by letter codes."""
    n = int(m.shape[0]).bit_length() - 1
    t = m.reshape((2,) * (2 * n))
    order = [ax for q in range(n) for ax in (q, n + q)]
    t = t.transpose(order).reshape((4,) * n)
    for q in range(n):
        t = np.moveaxis(np.tensordot(_PAULI_TRACE, t, axes=([1], [q])), 0, q)
    return t


def quantum_enhanced_distribution(circuit: Circuit) -> np.ndarray:
    """Probabilities of all 4^n Bell strings, indexed base-4 by Bell codes (qubit 0 first)."""
    if circuit.n > MAX_UNITARY_QUBITS:
        raise ResourceLimitError(f"quantum-enhanced simulation capped at n = {MAX_UNITARY_QUBITS}")
    u = circuit_unitary(circuit)
    coeff = pauli_traces(u @ u.T)
    n = circuit.n
    # reorder each axis from Pauli letters to Bell codes
    for q in range(n):
        coeff = np.take(coeff, BELL_TO_PAULI, axis=q)
    p = np.abs(coeff.ravel()) ** 2 / 4.0**n
    return p


def _index_to_bell(idx: np.ndarray, n: int) -> np.ndarray:
    shifts = 2 * np.arange(n - 1, -1, -1)
    return ((idx[:, None] >> shifts) & 3).astype(np.uint8)


def run_quantum_enhanced_dynamics(circuit: Circuit, cfg: DynamicsExperimentConfig, rng) -> OutcomeMatrix:
    if cfg.strategy != QUANTUM_ENHANCED:
        raise ValidationError("config strategy must be quantum_enhanced")
    if circuit.n != cfg.n:
        raise ValidationError("circuit size does not match config")
    p = quantum_enhanced_distribution(circuit)
    idx = rng.choice(p.size, size=cfg.repetitions, p=p / p.sum())
    rows = outcomes_to_bits(_index_to_bell(idx, circuit.n))
    rows = _noisy(rows, cfg.noise, rng)
    return OutcomeMatrix(rows, QUANTUM_ENHANCED, _meta(circuit, cfg))


def run_dynamics(circuit: Circuit, cfg: DynamicsExperimentConfig, rng) -> OutcomeMatrix:
    if cfg.strategy == CONVENTIONAL:
        return run_conventional_dynamics(circuit, cfg, rng)
    return run_quantum_enhanced_dynamics(circuit, cfg, rng)


def _meta(circuit: Circuit, cfg: DynamicsExperimentConfig) -> dict:
    return {
        "circuit_seed": circuit.seed,
        "symmetry_label": circuit.symmetry_label,
        "strategy": cfg.strategy,
        "n": cfg.n,
        "depth": circuit.depth,
        "repetitions": cfg.repetitions,
        "noise": None if cfg.noise is None else cfg.noise.to_json(),
    }

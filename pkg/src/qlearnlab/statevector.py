"""Dense statevector simulation with the Sycamore-style native gate set.

Qubit 0 is the most significant bit of a basis-state index, matching
``PauliString.to_matrix``.  States are flat complex arrays of length 2^n;
internally they are viewed as rank-n tensors, optionally with one trailing
batch axis so whole unitaries can be pushed through a circuit at once.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, InvalidDimensionError, ResourceLimitError, ValidationError
from .pauli import PAULI_MATRICES

MAX_QUBITS = 26
MAX_UNITARY_QUBITS = 12

_I2 = np.eye(2, dtype=complex)
_X, _Y, _Z = PAULI_MATRICES[1], PAULI_MATRICES[2], PAULI_MATRICES[3]
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

SYC = np.array(
    [
        [1, 0, 0, 0],
        [0, 0, -1j, 0],
        [0, -1j, 0, 0],
        [0, 0, 0, np.exp(-1j * np.pi / 6)],
    ],
    dtype=complex,
)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def z_pow(t: float) -> np.ndarray:
    return np.diag([1.0, np.exp(1j * np.pi * t)])


def x_pow(t: float) -> np.ndarray:
    return _H @ z_pow(t) @ _H


def phxz(a: float, x: float, z: float) -> np.ndarray:
    """Phased XZ gate Z^z Z^a X^x Z^-a (exponents in half-turns)."""
    return z_pow(z) @ z_pow(a) @ x_pow(x) @ z_pow(-a)


def rot_y(t: float) -> np.ndarray:
    """exp(-i t Y), a real rotation."""
    c, s = np.cos(t), np.sin(t)
    return np.array([[c, -s], [s, c]], dtype=complex)


_FIXED = {"SYC": SYC, "SWAP": SWAP, "CNOT": CNOT, "H": _H}
_ARITY = {"PhXZ": 1, "RotY": 1, "H": 1, "SYC": 2, "SWAP": 2, "CNOT": 2, "CompiledTwoQubit": 2}


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in _ARITY:
            raise ValidationError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if len(self.targets) != _ARITY[self.kind]:
            raise ValidationError(f"{self.kind} acts on {_ARITY[self.kind]} qubit(s)")
        if len(set(self.targets)) != len(self.targets):
            raise ValidationError("gate targets must be distinct")
        if self.kind == "CompiledTwoQubit":
            m = self.matrix
            if np.linalg.norm(m.conj().T @ m - np.eye(4)) > 1e-9:
                raise ValidationError("compiled two-qubit gate is not unitary")

    @classmethod
    def compiled(cls, matrix, targets) -> "Gate":
        m = np.asarray(matrix, dtype=complex).reshape(4, 4)
        return cls("CompiledTwoQubit", targets, tuple(np.concatenate([m.real.ravel(), m.imag.ravel()])))

    @property
    def matrix(self) -> np.ndarray:
        if self.kind in _FIXED:
            return _FIXED[self.kind]
        if self.kind == "PhXZ":
            return phxz(*self.params)
        if self.kind == "RotY":
            return rot_y(self.params[0])
        p = np.asarray(self.params)
        return (p[:16] + 1j * p[16:]).reshape(4, 4)

    def to_json(self) -> dict:
        return {"kind": self.kind, "targets": list(self.targets), "params": list(self.params)}

    @classmethod
    def from_json(cls, obj) -> "Gate":
        return cls(obj["kind"], tuple(obj["targets"]), tuple(obj.get("params", ())))


@dataclass
class Circuit:
    n: int
    gates: list[Gate] = field(default_factory=list)
    symmetry_label: str = "general"
    depth: int = 0
    seed: int | None = None

    def __post_init__(self):
        if self.symmetry_label not in ("general", "t_symmetric"):
            raise ValidationError(f"unknown symmetry label {self.symmetry_label!r}")
        for g in self.gates:
            if max(g.targets) >= self.n:
                raise InvalidDimensionError(f"gate {g.kind} targets qubit outside 0..{self.n - 1}")

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "depth": self.depth,
            "symmetry_label": self.symmetry_label,
            "seed": self.seed,
            "gates": [g.to_json() for g in self.gates],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, obj) -> "Circuit":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(
            n=obj["n"],
            gates=[Gate.from_json(g) for g in obj["gates"]],
            symmetry_label=obj["symmetry_label"],
            depth=obj.get("depth", 0),
            seed=obj.get("seed"),
        )


# -- kernels ------------------------------------------------------------------------


def _apply_tensor(psi: np.ndarray, matrix: np.ndarray, targets: tuple[int, ...]) -> np.ndarray:
    """Apply a k-qubit matrix to axes ``targets`` of a tensor with leading qubit axes."""
    k = len(targets)
    op = matrix.reshape((2,) * (2 * k))
    out = np.tensordot(op, psi, axes=(list(range(k, 2 * k)), list(targets)))
    return np.moveaxis(out, list(range(k)), list(targets))


def zero_state(n: int) -> np.ndarray:
    if n > MAX_QUBITS:
        raise ResourceLimitError(f"statevector capped at {MAX_QUBITS} qubits")
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = 1.0
    return psi


def _num_qubits(state: np.ndarray) -> int:
    n = int(state.shape[0]).bit_length() - 1
    if 2**n != state.shape[0]:
        raise InvalidDimensionError("state length is not a power of two")
    return n


def apply_gate(state: np.ndarray, gate: Gate) -> np.ndarray:
    """Return ``gate`` applied to a flat state (or to each column of a 2D batch)."""
    n = _num_qubits(state)
    if max(gate.targets) >= n:
        raise InvalidDimensionError(f"target {max(gate.targets)} out of range for {n} qubits")
    batch = state.shape[1:]
    psi = state.reshape((2,) * n + batch)
    return _apply_tensor(psi, gate.matrix, gate.targets).reshape(state.shape)


def simulate(circuit: Circuit, state: np.ndarray | None = None) -> np.ndarray:
    if circuit.n > MAX_QUBITS:
        raise ResourceLimitError(f"statevector capped at {MAX_QUBITS} qubits")
    psi = zero_state(circuit.n) if state is None else np.asarray(state, dtype=complex)
    shape = psi.shape
    psi = psi.reshape((2,) * circuit.n + shape[1:])
    for g in circuit.gates:
        psi = _apply_tensor(psi, g.matrix, g.targets)
    return psi.reshape(shape)


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Dense unitary built by pushing every basis state through the circuit."""
    if circuit.n > MAX_UNITARY_QUBITS:
        raise ResourceLimitError(f"dense unitaries capped at {MAX_UNITARY_QUBITS} qubits")
    d = 2**circuit.n
    return simulate(circuit, np.eye(d, dtype=complex))


def embed_gate(matrix: np.ndarray, targets, n: int) -> np.ndarray:
    """Dense 2^n x 2^n operator of a gate; an independent path for tests."""
    k = len(targets)
    rest = [q for q in range(n) if q not in targets]
    order = list(targets) + rest
    full = np.kron(matrix, np.eye(2 ** (n - k)))
    perm = np.argsort(order)
    t = full.reshape((2,) * (2 * n))
    t = t.transpose(list(perm) + [n + p for p in perm])
    return t.reshape(2**n, 2**n)


# -- T-symmetric gate compilation -------------------------------------------------------


def _su2_exp(a: float, b: float, c: float) -> np.ndarray:
    r = np.sqrt(a * a + b * b + c * c)
    if r < 1e-15:
        return _I2.copy()
    return np.cos(r) * _I2 + 1j * np.sin(r) / r * (a * _X + b * _Y + c * _Z)


def dressed_syc(params) -> np.ndarray:
    """(U3 x U4) SYC (U1 x U2) with U_i = exp(i(a_i X + b_i Y + c_i Z))."""
    u = [_su2_exp(*params[3 * i : 3 * i + 3]) for i in range(4)]
    return np.kron(u[2], u[3]) @ SYC @ np.kron(u[0], u[1])


def fix_global_phase(m: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the largest first-row entry is real positive."""
    row = m[0]
    j = int(np.argmax(np.abs(row)))
    return m * (abs(row[j]) / row[j])


def _imag_residual(params) -> np.ndarray:
    return fix_global_phase(dressed_syc(params)).imag.ravel()


def _residual_jacobian(theta: np.ndarray, step: float) -> np.ndarray:
    jac = np.empty((16, theta.size))
    for k in range(theta.size):
        e = np.zeros(theta.size)
        e[k] = step
        jac[:, k] = (_imag_residual(theta + e) - _imag_residual(theta - e)) / (2 * step)
    return jac


@dataclass(frozen=True)
class CompiledGate:
    matrix: np.ndarray
    params: np.ndarray
    loss: float  # Frobenius norm of the imaginary part after phase fixing
    unitarity_residual: float
    iterations: int


def compile_tsym_gate(
    rng: np.random.Generator, max_iters: int = 200, tol: float = 1e-12, step: float = 1e-7
) -> CompiledGate:
    """Find single-qubit dressings that make the SYC gate real orthogonal.

    Minimizes the Frobenius norm of the imaginary part of the phase-fixed
    gate over the 12 dressing parameters.  Descent directions are damped
    Gauss-Newton steps on central finite-difference Jacobians; the damping
    is raised until the loss decreases, so every accepted step is a descent
    step.  Raises :class:`ConvergenceError` if the loss stays above ``tol``.
    """
    if tol <= 0:
        raise ValidationError("tol must be positive")
    theta = rng.uniform(-np.pi, np.pi, size=12)
    r = _imag_residual(theta)
    f = r @ r
    damping = 1e-3
    it = 0
    for it in range(1, max_iters + 1):
        if np.sqrt(f) < tol:
            break
        jac = _residual_jacobian(theta, step)
        grad = jac.T @ r
        jtj = jac.T @ jac
        while True:
            delta = np.linalg.solve(jtj + damping * np.eye(12), -grad)
            cand = theta + delta
            rc = _imag_residual(cand)
            fc = rc @ rc
            if fc < f:
                damping = max(damping / 3, 1e-12)
                break
            damping *= 4
            if damping > 1e8:
                raise ConvergenceError("stalled in a non-real local minimum; restart with a new seed")
        theta, r, f = cand, rc, fc
    loss = float(np.sqrt(f))
    if loss >= tol:
        raise ConvergenceError(f"loss {loss:.3e} above tolerance after {max_iters} iterations")
    v = fix_global_phase(dressed_syc(theta))
    resid = float(np.linalg.norm(v.conj().T @ v - np.eye(4)))
    return CompiledGate(v, theta, loss, resid, it)


def compile_tsym_gate_retrying(rng: np.random.Generator, attempts: int = 30, **kw) -> CompiledGate:
    for _ in range(attempts):
        try:
            return compile_tsym_gate(rng, **kw)
        except ConvergenceError:
            continue
    raise ConvergenceError(f"no T-symmetric compilation in {attempts} attempts")


def operator_schmidt_rank(m: np.ndarray, tol: float = 1e-9) -> int:
    """Number of non-negligible operator-Schmidt coefficients of a two-qubit gate."""
    r = m.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    s = np.linalg.svd(r, compute_uv=False)
    return int(np.sum(s > tol * s[0]))


# -- random 1D circuits -----------------------------------------------------------------


def brickwork_pairs(n: int, layer: int) -> list[tuple[int, int]]:
    """Neighbouring pairs for the given two-qubit layer (0-indexed qubits)."""
    start = layer % 2
    return [(q, q + 1) for q in range(start, n - 1, 2)]


def generate_1d_circuit(
    n: int,
    depth: int,
    symmetry: str,
    rng: np.random.Generator,
    tsym_gate: np.ndarray | None = None,
    seed: int | None = None,
) -> Circuit:
    """Alternate random single-qubit layers with brickwork two-qubit layers.

    ``general``: uniform PhXZ exponents in [0, 2) and SYC entanglers.
    ``t_symmetric``: exp(-i t Y) with t uniform in [0, 2 pi) and a compiled
    real two-qubit gate (compiled from ``rng`` unless ``tsym_gate`` is given).
    """
    if n < 2:
        raise InvalidDimensionError("1D circuits need n >= 2")
    if depth < 0:
        raise ValidationError("depth must be >= 0")
    if symmetry not in ("general", "t_symmetric"):
        raise ValidationError(f"unknown symmetry {symmetry!r}")
    gates: list[Gate] = []
    if symmetry == "t_symmetric" and tsym_gate is None and depth > 0:
        tsym_gate = compile_tsym_gate_retrying(rng).matrix
    for layer in range(depth):
        for q in range(n):
            if symmetry == "general":
                gates.append(Gate("PhXZ", (q,), tuple(rng.uniform(0, 2, size=3))))
            else:
                gates.append(Gate("RotY", (q,), (rng.uniform(0, 2 * np.pi),)))
        for pair in brickwork_pairs(n, layer):
            if symmetry == "general":
                gates.append(Gate("SYC", pair))
            else:
                gates.append(Gate.compiled(tsym_gate, pair))
    return Circuit(n, gates, symmetry, depth, seed)

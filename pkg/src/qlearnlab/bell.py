"""Two-copy Bell-basis measurements and the absolute-value estimators built on them."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ensemble import EnsembleSpec, sample_states
from .errors import InvalidDimensionError, InvalidTaskError, ValidationError
from .noise import ReadoutProfile, apply_readout_noise, noise_inversion
from .pauli import BELL_SIGNS, BELL_STATES, EIGENSTATES, PauliString, check_qubit_state


def bell_probs(a, b) -> np.ndarray:
    """Outcome probabilities (Psi+, Psi-, Phi+, Phi-) for measuring a (x) b."""
    a = check_qubit_state(a)
    b = check_qubit_state(b)
    amps = BELL_STATES.conj() @ np.kron(a, b)
    return np.abs(amps) ** 2


def _bell_table() -> np.ndarray:
    table = np.empty((4, 2, 4, 2, 4))
    for la in range(4):
        for sa in range(2):
            for lb in range(4):
                for sb in range(2):
                    table[la, sa, lb, sb] = bell_probs(EIGENSTATES[la, sa], EIGENSTATES[lb, sb])
    return table


# BELL_PROB[letter_a, sign_idx_a, letter_b, sign_idx_b, outcome]
BELL_PROB = _bell_table()
_BELL_CUM = np.cumsum(BELL_PROB, axis=-1)


@dataclass
class BellDataset:
    outcomes: np.ndarray  # (N_Q, n) uint8 Bell codes
    spec: EnsembleSpec | None = None
    seed: int | None = None
    noise: ReadoutProfile | None = field(default=None, repr=False)

    def __post_init__(self):
        self.outcomes = np.asarray(self.outcomes, dtype=np.uint8)
        if self.outcomes.ndim != 2:
            raise ValidationError("Bell outcomes must be a 2D array")
        if self.outcomes.size and self.outcomes.max() > 3:
            raise ValidationError("Bell outcome codes must be in 0..3")

    @property
    def n(self) -> int:
        return self.outcomes.shape[1]

    @property
    def n_q(self) -> int:
        return self.outcomes.shape[0]

    @property
    def bits(self) -> np.ndarray:
        """``(N_Q, 2n)`` wire bits; qubit k occupies columns 2k (high) and 2k+1 (low)."""
        return outcomes_to_bits(self.outcomes)

    @classmethod
    def from_bits(cls, bits, **meta) -> "BellDataset":
        return cls(bits_to_outcomes(bits), **meta)


def outcomes_to_bits(outcomes) -> np.ndarray:
    outcomes = np.asarray(outcomes, dtype=np.uint8)
    bits = np.empty(outcomes.shape[:-1] + (2 * outcomes.shape[-1],), dtype=np.uint8)
    bits[..., 0::2] = outcomes >> 1
    bits[..., 1::2] = outcomes & 1
    return bits


def bits_to_outcomes(bits) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.shape[-1] % 2:
        raise ValidationError("Bell bit rows must have even width")
    return (bits[..., 0::2] << 1) | bits[..., 1::2]


def sample_bell_outcomes(letters_a, signs_a, letters_b, signs_b, rng) -> np.ndarray:
    """Per-qubit Bell measurement of two batches of product states."""
    cum = _BELL_CUM[letters_a, (1 - signs_a) // 2, letters_b, (1 - signs_b) // 2]
    u = rng.random(cum.shape[:-1])
    return np.minimum((u[..., None] >= cum[..., :3]).sum(axis=-1), 3).astype(np.uint8)


def run_quantum_enhanced(
    spec: EnsembleSpec,
    n_q: int,
    noise: ReadoutProfile | None = None,
    rng: np.random.Generator | None = None,
    seed: int | None = None,
) -> BellDataset:
    """Simulate ``n_q`` rounds, each consuming two fresh copies of rho."""
    if n_q < 1:
        raise ValidationError("N_Q must be >= 1")
    if rng is None:
        raise ValidationError("run_quantum_enhanced needs a random stream")
    la, sa = sample_states(spec, n_q, rng)
    lb, sb = sample_states(spec, n_q, rng)
    outcomes = sample_bell_outcomes(la, sa, lb, sb, rng)
    if noise is not None:
        if noise.width != 2 * spec.n:
            raise ValidationError(f"noise profile must cover {2 * spec.n} bits")
        outcomes = bits_to_outcomes(apply_readout_noise(outcomes_to_bits(outcomes), noise, rng))
    return BellDataset(outcomes, spec=spec, seed=seed, noise=noise)


def _check(data: BellDataset, o: PauliString):
    if o.n != data.n:
        raise InvalidDimensionError(f"observable has {o.n} qubits, data has {data.n}")


def sign_products(outcomes, o: PauliString) -> np.ndarray:
    """Per-record product of Bell signs for observable ``o``."""
    signs = BELL_SIGNS[o.codes[None, :], outcomes]
    # parity of -1 entries avoids overflow for long strings
    return 1 - 2 * ((signs < 0).sum(axis=1) & 1)


def estimate_a(data: BellDataset, o: PauliString) -> float:
    """Unbiased estimate of |tr(O rho)|^2 from Bell records."""
    _check(data, o)
    if data.n_q == 0:
        raise ValidationError("empty dataset")
    return float(sign_products(data.outcomes, o).mean())


def estimate_b(data: BellDataset, o: PauliString) -> float:
    return b_from_a(estimate_a(data, o))


def b_from_a(a_hat: float) -> float:
    return float(np.sqrt(max(0.0, a_hat)))


def compare_observables(data: BellDataset, o1: PauliString, o2: PauliString) -> int:
    """1 if |tr(O1 rho)| is estimated at least as large as |tr(O2 rho)|, else 2."""
    if o1.n != o2.n:
        raise InvalidDimensionError("observables differ in length")
    if o1 == o2:
        raise InvalidTaskError("the two observables must differ")
    b1, b2 = estimate_b(data, o1), estimate_b(data, o2)
    return 1 if b1 >= b2 else 2


def mitigated_estimate_a(
    data: BellDataset,
    profile: ReadoutProfile,
    o: PauliString,
    inverse_cnt: int = 20,
    rng: np.random.Generator | None = None,
) -> float:
    """Readout-mitigated estimate of |tr(O rho)|^2.

    Records are expanded by :func:`noise_inversion`; the result is the
    coefficient-weighted mean of the replica sign products.
    """
    _check(data, o)
    if profile.width != 2 * data.n:
        raise ValidationError(f"profile covers {profile.width} bits, data needs {2 * data.n}")
    expanded = noise_inversion(data.bits, profile, inverse_cnt, rng)
    signs = sign_products(bits_to_outcomes(expanded.rows), o)
    total = expanded.coefficients.sum()
    if total <= 0:
        raise ValidationError("non-positive coefficient mass; increase N_Q")
    return float(expanded.coefficients @ signs / total)

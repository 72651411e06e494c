import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import chisquare

from oracles import BELL, PAULIS, pauli_matrix
from qlearnlab.errors import InvalidDimensionError
from qlearnlab.pauli import (
    BELL_STATES,
    BELL_TO_PAULI,
    PAULI_TO_BELL,
    BellOutcome,
    PauliLetter,
    PauliString,
    bell_sign,
    pauli_eigenstate,
    sample_distinct_pauli,
    sample_pauli_string,
)
from qlearnlab.rng import stream

LETTERS = "IXYZ"
pauli_text = st.text(alphabet=LETTERS, min_size=1, max_size=40)


@given(pauli_text)
def test_text_round_trip(text):
    p = PauliString.from_str(text)
    assert str(p) == text
    assert PauliString.from_str(str(p)) == p
    assert hash(PauliString.from_str(text)) == hash(p)


@given(pauli_text)
def test_codes_and_weight(text):
    p = PauliString.from_str(text)
    assert list(p.codes) == [LETTERS.index(c) for c in text]
    assert p.weight == sum(c != "I" for c in text)
    assert p.is_identity() == (p.weight == 0)


def test_codes_read_only():
    p = PauliString.from_str("XZ")
    with pytest.raises(ValueError):
        p.codes[0] = 0


def test_zero_length_rejected():
    with pytest.raises(InvalidDimensionError):
        PauliString(0, 0, 0)
    with pytest.raises(InvalidDimensionError):
        sample_pauli_string(0, True, stream(0))


@pytest.mark.parametrize("text", ["X", "YZ", "IXZ", "ZZYI"])
def test_to_matrix_matches_kron(text):
    np.testing.assert_allclose(PauliString.from_str(text).to_matrix(), pauli_matrix(text), atol=1e-15)


def test_sampler_n1_excluding_identity():
    rng = stream(1)
    seen = {str(sample_pauli_string(1, True, rng)) for _ in range(300)}
    assert seen == {"X", "Y", "Z"}


def test_sampler_n1_including_identity():
    rng = stream(2)
    counts = {c: 0 for c in LETTERS}
    for _ in range(4000):
        counts[str(sample_pauli_string(1, False, rng))] += 1
    assert chisquare(list(counts.values())).pvalue > 0.01


def test_sampler_n2_uniform_chi_square():
    rng = stream(3)
    strings = ["".join(p) for p in itertools.product(LETTERS, repeat=2)][1:]
    counts = dict.fromkeys(strings, 0)
    for _ in range(100_000):
        counts[str(sample_pauli_string(2, True, rng))] += 1
    assert len(counts) == 15
    assert chisquare(list(counts.values())).pvalue > 0.01


def test_distinct_sampler_avoids():
    rng = stream(4)
    avoid = PauliString.from_str("Z")
    assert all(sample_distinct_pauli(1, avoid, rng) != avoid for _ in range(200))


def test_eigenstate_examples():
    np.testing.assert_allclose(pauli_eigenstate(PauliLetter.Z, 1), [1, 0])
    np.testing.assert_allclose(pauli_eigenstate(PauliLetter.X, -1), np.array([1, -1]) / np.sqrt(2))
    plus_i = pauli_eigenstate(PauliLetter.Y, 1)
    np.testing.assert_allclose(plus_i, np.array([1, 1j]) / np.sqrt(2))
    np.testing.assert_allclose(PAULIS["Y"] @ plus_i, plus_i, atol=1e-12)
    np.testing.assert_allclose(pauli_eigenstate(PauliLetter.I, -1), [0, 1])


@pytest.mark.parametrize("letter", [1, 2, 3])
@pytest.mark.parametrize("sign", [1, -1])
def test_eigenstate_round_trip(letter, sign):
    v = pauli_eigenstate(letter, sign)
    np.testing.assert_allclose(PAULIS[LETTERS[letter]] @ v, sign * v, atol=1e-12)


def test_bell_sign_examples():
    assert bell_sign(PauliLetter.X, BellOutcome.PSI_PLUS) == 1
    assert bell_sign(PauliLetter.Y, BellOutcome.PSI_PLUS) == -1
    assert bell_sign(PauliLetter.Z, BellOutcome.PHI_PLUS) == -1


@pytest.mark.parametrize("letter", range(4))
@pytest.mark.parametrize("outcome", range(4))
def test_bell_sign_matches_dense_trace(letter, outcome):
    sig = PAULIS[LETTERS[letter]]
    b = BELL[outcome]
    exact = np.real(b.conj() @ np.kron(sig, sig) @ b)
    assert bell_sign(letter, outcome) == pytest.approx(exact, abs=1e-12)


def test_bell_states_match_reference():
    for k in range(4):
        np.testing.assert_allclose(BELL_STATES[k], BELL[k], atol=1e-15)


def test_bell_pauli_correspondence():
    # the Bell state for outcome b is (sigma x I) applied to the first Bell state
    for b in range(4):
        sig = PAULIS[LETTERS[BELL_TO_PAULI[b]]]
        v = np.kron(sig, np.eye(2)) @ BELL[0]
        assert abs(abs(np.vdot(v, BELL[b])) - 1) < 1e-12
    assert list(PAULI_TO_BELL[BELL_TO_PAULI]) == [0, 1, 2, 3]
    assert BellOutcome.PHI_MINUS.bits == "11"
    assert BellOutcome.PSI_MINUS.pauli == PauliLetter.Z

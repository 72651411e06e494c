import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import BELL, density, eigvec, two_copy_bell_distribution
from qlearnlab.bell import (
    BELL_PROB,
    BellDataset,
    b_from_a,
    bell_probs,
    bits_to_outcomes,
    compare_observables,
    estimate_a,
    estimate_b,
    mitigated_estimate_a,
    outcomes_to_bits,
    run_quantum_enhanced,
    sign_products,
)
from qlearnlab.ensemble import EnsembleSpec, enumerate_branches
from qlearnlab.errors import InvalidDimensionError, InvalidTaskError, ValidationError
from qlearnlab.noise import ReadoutProfile
from qlearnlab.pauli import PauliString, sample_distinct_pauli, sample_pauli_string
from qlearnlab.rng import stream

LETTERS = "IXYZ"


def spec(text, alpha=0.9):
    return EnsembleSpec(PauliString.from_str(text), alpha)


def exhaustive_bell_distribution(sp):
    """Exact distribution of the simulated protocol from branch enumeration and BELL_PROB."""
    branches = list(enumerate_branches(sp))
    out = {}
    for (pa, a), (pb, b) in itertools.product(branches, repeat=2):
        per_qubit = [
            BELL_PROB[a.letters[k], (1 - a.signs[k]) // 2, b.letters[k], (1 - b.signs[k]) // 2]
            for k in range(sp.n)
        ]
        for combo in itertools.product(range(4), repeat=sp.n):
            p = pa * pb * np.prod([per_qubit[k][c] for k, c in enumerate(combo)])
            out[combo] = out.get(combo, 0.0) + p
    return out


def test_bell_probs_examples():
    zero = np.array([1, 0])
    plus = np.array([1, 1]) / np.sqrt(2)
    minus = np.array([1, -1]) / np.sqrt(2)
    np.testing.assert_allclose(bell_probs(zero, zero), [0.5, 0.5, 0, 0], atol=1e-15)
    np.testing.assert_allclose(bell_probs(plus, minus), [0, 0.5, 0, 0.5], atol=1e-15)
    # frozen from the dense projector oracle
    np.testing.assert_allclose(bell_probs(zero, np.array([1, 1j]) / np.sqrt(2)), [0.25] * 4, atol=1e-15)


def test_bell_probs_rejects_unnormalized():
    with pytest.raises(ValidationError):
        bell_probs([1, 1], [1, 0])


@pytest.mark.parametrize("la,lb", list(itertools.product("XYZ", repeat=2)))
@pytest.mark.parametrize("sa,sb", list(itertools.product((1, -1), repeat=2)))
def test_bell_table_matches_dense(la, lb, sa, sb):
    a, b = eigvec(la, sa), eigvec(lb, sb)
    rho = np.kron(np.outer(a, a.conj()), np.outer(b, b.conj()))
    expected = two_copy_bell_distribution_single(rho)
    got = BELL_PROB[LETTERS.index(la), (1 - sa) // 2, LETTERS.index(lb), (1 - sb) // 2]
    np.testing.assert_allclose(got, expected, atol=1e-12)


def two_copy_bell_distribution_single(rho2):
    return np.array([np.real(v.conj() @ rho2 @ v) for v in BELL])


@pytest.mark.parametrize("text", ["Z", "X", "YZ", "XIY"])
def test_protocol_distribution_matches_two_copy_oracle(text):
    sp = spec(text, 0.9)
    ours = exhaustive_bell_distribution(sp)
    dense = two_copy_bell_distribution(density(text, 0.9))
    for k in dense:
        assert ours[k] == pytest.approx(dense[k], abs=1e-12)


@pytest.mark.parametrize("text,alpha", [("Z", 0.95), ("XY", 0.9), ("IZX", -0.7), ("YYY", 0.9)])
def test_estimator_unbiased_exhaustive(text, alpha):
    sp = spec(text, alpha)
    dist = exhaustive_bell_distribution(sp)
    rho = density(text, alpha)
    combos = np.array(list(dist))
    probs = np.array([dist[tuple(c)] for c in combos])
    for o_letters in itertools.product(LETTERS, repeat=sp.n):
        o = PauliString.from_str("".join(o_letters))
        expectation = probs @ sign_products(combos, o)
        exact = abs(np.trace(o.to_matrix() @ rho)) ** 2
        assert expectation == pytest.approx(exact, abs=1e-10)


def test_noiseless_all_psi_plus():
    data = BellDataset(np.zeros((50, 3), dtype=np.uint8))
    assert estimate_a(data, PauliString.from_str("ZZZ")) == 1.0


def test_a_hat_near_081():
    sp = spec("ZZZZ", 0.9)
    data = run_quantum_enhanced(sp, 100_000, rng=stream(11))
    s = sign_products(data.outcomes, sp.pauli)
    sigma = s.std() / np.sqrt(len(s))
    assert abs(s.mean() - 0.81) < 3 * sigma
    other = sign_products(data.outcomes, PauliString.from_str("XZIY"))
    assert abs(other.mean()) < 5 * other.std() / np.sqrt(len(other))


def test_b_from_a():
    assert b_from_a(0.81) == pytest.approx(0.9)
    assert b_from_a(-0.03) == 0.0
    assert b_from_a(0.25) == pytest.approx(0.5)


def test_zero_rounds_rejected():
    with pytest.raises(ValidationError):
        run_quantum_enhanced(spec("Z"), 0, rng=stream(0))


def test_identity_noise_matches_noiseless():
    sp = spec("XZ", 0.9)
    a = run_quantum_enhanced(sp, 500, rng=stream(3))
    b = run_quantum_enhanced(sp, 500, noise=ReadoutProfile.identity(4), rng=stream(3))
    np.testing.assert_array_equal(a.outcomes, b.outcomes)


def test_comparator_tie_and_errors():
    data = BellDataset(np.zeros((4, 2), dtype=np.uint8))
    assert compare_observables(data, PauliString.from_str("ZZ"), PauliString.from_str("XX")) == 1
    with pytest.raises(InvalidTaskError):
        compare_observables(data, PauliString.from_str("ZZ"), PauliString.from_str("ZZ"))
    with pytest.raises(InvalidDimensionError):
        compare_observables(data, PauliString.from_str("Z"), PauliString.from_str("X"))
    with pytest.raises(InvalidDimensionError):
        estimate_a(data, PauliString.from_str("ZZZ"))


def test_comparator_accuracy_n20():
    correct = 0
    for t in range(500):
        rng = stream(21, t)
        p = sample_pauli_string(20, True, rng)
        q = sample_distinct_pauli(20, p, rng)
        data = run_quantum_enhanced(EnsembleSpec(p, 0.9), 100, rng=rng)
        correct += compare_observables(data, p, q) == 1
    assert correct / 500 >= 0.9


def test_accuracy_non_decreasing_in_rounds():
    n, trials = 6, 2000
    accs = []
    for n_q in (1, 4, 16):
        ok = 0
        for t in range(trials):
            rng = stream(31, n_q, t)
            p = sample_pauli_string(n, True, rng)
            q = sample_distinct_pauli(n, p, rng)
            data = run_quantum_enhanced(EnsembleSpec(p, 0.9), n_q, rng=rng)
            ok += compare_observables(data, p, q) == 1
        accs.append(ok / trials)
    slack = 2 * np.sqrt(0.25 / trials)
    assert all(b >= a - slack for a, b in zip(accs, accs[1:]))


@settings(max_examples=50, deadline=None)
@given(arrays(np.uint8, st.tuples(st.integers(1, 30), st.integers(1, 6)), elements=st.integers(0, 3)))
def test_bits_round_trip_and_range(outcomes):
    np.testing.assert_array_equal(bits_to_outcomes(outcomes_to_bits(outcomes)), outcomes)
    data = BellDataset(outcomes)
    o = PauliString.from_letters([3] * outcomes.shape[1])
    assert -1.0 <= estimate_a(data, o) <= 1.0
    assert 0.0 <= estimate_b(data, o) <= 1.0


def test_bits_layout():
    # qubit 0 is Phi- (11), qubit 1 is Psi- (01)
    np.testing.assert_array_equal(outcomes_to_bits(np.array([[3, 1]])), [[1, 1, 0, 1]])


def test_mitigation_identity_profile_is_exact():
    sp = spec("ZZ", 0.9)
    data = run_quantum_enhanced(sp, 2000, rng=stream(40))
    for prof in (ReadoutProfile.identity(4), ReadoutProfile.uniform(4, 0.0)):
        m = mitigated_estimate_a(data, prof, sp.pauli, inverse_cnt=5, rng=stream(41))
        assert m == estimate_a(data, sp.pauli)


def test_mitigation_width_mismatch():
    data = BellDataset(np.zeros((3, 2), dtype=np.uint8))
    with pytest.raises(ValidationError):
        mitigated_estimate_a(data, ReadoutProfile.identity(3), PauliString.from_str("ZZ"), rng=stream(0))


@pytest.mark.parametrize("flip", [0.05, 0.15])
def test_mitigation_reduces_bias(flip):
    sp = spec("ZZ", 0.9)
    prof = ReadoutProfile.uniform(4, flip)
    noisy = run_quantum_enhanced(sp, 40_000, noise=prof, rng=stream(42, int(flip * 100)))
    raw = estimate_a(noisy, sp.pauli)
    mit = mitigated_estimate_a(noisy, prof, sp.pauli, rng=stream(43))
    assert abs(mit - 0.81) < abs(raw - 0.81)

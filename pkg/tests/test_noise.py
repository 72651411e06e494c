import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlearnlab.errors import ValidationError
from qlearnlab.noise import ReadoutProfile, apply_readout_noise, noise_inversion
from qlearnlab.rng import stream


def test_identity_profile_keeps_bits():
    bits = stream(0).integers(0, 2, size=(100, 5)).astype(np.uint8)
    np.testing.assert_array_equal(apply_readout_noise(bits, ReadoutProfile.identity(5), stream(1)), bits)


def test_certain_flip_on_bit_zero():
    prof = ReadoutProfile.symmetric([1.0, 0.0])
    bits = stream(2).integers(0, 2, size=(50, 2)).astype(np.uint8)
    out = apply_readout_noise(bits, prof, stream(3))
    np.testing.assert_array_equal(out[:, 0], 1 - bits[:, 0])
    np.testing.assert_array_equal(out[:, 1], bits[:, 1])


def test_flip_rate():
    bits = np.zeros((1_000_000, 1), dtype=np.uint8)
    out = apply_readout_noise(bits, ReadoutProfile.uniform(1, 0.05), stream(4))
    assert abs(out.mean() - 0.05) < 3 * np.sqrt(0.05 * 0.95 / 1_000_000)


def test_asymmetric_flip_uses_true_bit():
    calib = np.array([[[0.9, 0.3], [0.1, 0.7]]])  # P(flip|0)=0.1, P(flip|1)=0.3
    prof = ReadoutProfile(calib)
    np.testing.assert_allclose(prof.flip_probabilities(), [[0.1, 0.3]])
    ones = apply_readout_noise(np.ones((200_000, 1), dtype=np.uint8), prof, stream(5))
    assert abs((1 - ones.mean()) - 0.3) < 0.005


def test_width_mismatch():
    with pytest.raises(ValidationError):
        apply_readout_noise(np.zeros((2, 3), dtype=np.uint8), ReadoutProfile.identity(2), stream(0))
    with pytest.raises(ValidationError):
        noise_inversion(np.zeros((2, 3), dtype=np.uint8), ReadoutProfile.identity(2), rng=stream(0))


def test_malformed_profile():
    with pytest.raises(ValidationError):
        ReadoutProfile(np.array([[[0.9, 0.1], [0.2, 0.9]]]))
    with pytest.raises(ValidationError):
        ReadoutProfile(np.eye(2))


def test_identity_inversion():
    data = stream(6).integers(0, 2, size=(30, 4)).astype(np.uint8)
    exp = noise_inversion(data, ReadoutProfile.identity(4), 20, stream(7))
    np.testing.assert_array_equal(exp.rows, np.repeat(data, 20, axis=0))
    assert np.all(exp.coefficients == 1)


def test_half_flip_inversion():
    data = np.zeros((50_000, 1), dtype=np.uint8)
    exp = noise_inversion(data, ReadoutProfile.uniform(1, 0.5), 1, stream(8))
    assert len(exp.rows) == 50_000
    frac = exp.rows.mean()
    assert abs(frac - 0.5) < 3 * 0.5 / np.sqrt(50_000)
    np.testing.assert_array_equal(exp.coefficients, np.where(exp.rows[:, 0] == 1, -1.0, 1.0))


def test_coefficients_count_flips():
    data = stream(9).integers(0, 2, size=(200, 3)).astype(np.uint8)
    exp = noise_inversion(data, ReadoutProfile.uniform(3, 0.2), 5, stream(10))
    flips = (exp.rows ^ np.repeat(data, 5, axis=0)).sum(axis=1)
    np.testing.assert_array_equal(exp.coefficients, (-1.0) ** flips)


def test_inversion_keep_probabilities_follow_pseudocode():
    # measured 0 keeps with calib[1,1]; measured 1 keeps with calib[0,0]
    calib = np.array([[[0.9, 0.4], [0.1, 0.6]]])
    prof = ReadoutProfile(calib)
    zeros = noise_inversion(np.zeros((100_000, 1), dtype=np.uint8), prof, 1, stream(11))
    ones = noise_inversion(np.ones((100_000, 1), dtype=np.uint8), prof, 1, stream(12))
    assert abs(zeros.rows.mean() - 0.4) < 0.006
    assert abs((1 - ones.rows.mean()) - 0.1) < 0.004


def test_hardware_like_range():
    prof = ReadoutProfile.random_hardware_like(40, stream(13))
    fp = prof.flip_probabilities()
    assert fp.min() >= 0.03 and fp.max() <= 0.07


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0, 0.5), min_size=1, max_size=8))
def test_json_round_trip(flips):
    prof = ReadoutProfile.symmetric(flips)
    back = ReadoutProfile.from_json(prof.to_json())
    np.testing.assert_array_equal(back.calib, prof.calib)

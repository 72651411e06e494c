import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.linalg import eigh as scipy_eigh
from sklearn.decomposition import KernelPCA

from qlearnlab.dynamics import QUANTUM_ENHANCED, DynamicsExperimentConfig, run_dynamics
from qlearnlab.errors import DegenerateError, InvalidDimensionError, ValidationError
from qlearnlab.kpca import (
    build_features,
    center_kernel,
    classify_by_split,
    fit_kernel_pca,
    gaussian_kernel,
    median_gamma,
    project,
    score_accuracy,
    split_threshold,
)
from qlearnlab.rng import stream
from qlearnlab.statevector import compile_tsym_gate_retrying, generate_1d_circuit


def align(a, b):
    """Flip signs of the columns of ``a`` to match ``b``."""
    s = np.sign(np.sum(a * b, axis=0))
    return a * np.where(s == 0, 1, s)


def test_features_example():
    np.testing.assert_allclose(build_features(np.array([[0, 1], [1, 1]])), [0.5, 1.0, 0.25, 0.0])
    np.testing.assert_array_equal(build_features(np.zeros((5, 3))), np.zeros(6))
    with pytest.raises(ValidationError):
        build_features(np.zeros((1, 3)))


def test_features_bernoulli():
    rows = (stream(1).random((100_000, 1)) < 0.3).astype(np.uint8)
    mean, var = build_features(rows)
    sigma = np.sqrt(0.21 / 100_000)
    assert abs(mean - 0.3) < 3 * sigma
    assert abs(var - 0.21) < 0.005


def test_identical_vectors_kernel_one():
    x = np.array([[0.3, 0.7]])
    assert gaussian_kernel(x, x, 2.0)[0, 0] == 1.0


def test_square_corners_match_dense_eigensolver():
    x = np.array([[0, 0], [1, 0], [0, 1], [1, 1]], dtype=float)
    model = fit_kernel_pca(x, gamma=1.0, d=2)
    k = np.exp(-((x[:, None] - x[None]) ** 2).sum(-1))
    n = len(x)
    h = np.eye(n) - np.ones((n, n)) / n
    vals, vecs = scipy_eigh(h @ k @ h)
    order = np.argsort(vals)[::-1][:2]
    ref = vecs[:, order] * np.sqrt(vals[order])
    ours = model.training_projections()
    # equal top eigenvalues make the 2D subspace, not individual axes, canonical
    np.testing.assert_allclose(ours @ ours.T, ref @ ref.T, atol=1e-8)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_matches_sklearn(seed):
    x = stream(seed).normal(size=(30, 6))
    gamma = median_gamma(x)
    model = fit_kernel_pca(x, gamma=gamma, d=3)
    ref = KernelPCA(n_components=3, kernel="rbf", gamma=gamma).fit_transform(x)
    ours = model.training_projections()
    np.testing.assert_allclose(align(ours, ref), ref, atol=1e-8)
    new = stream(seed + 10).normal(size=(4, 6))
    ref_new = KernelPCA(n_components=3, kernel="rbf", gamma=gamma).fit(x).transform(new)
    np.testing.assert_allclose(align(project(model, new), ref_new), ref_new, atol=1e-8)


def test_centered_rows_sum_zero():
    x = stream(3).normal(size=(12, 4))
    kc = center_kernel(gaussian_kernel(x, x, 0.5))
    np.testing.assert_allclose(kc.sum(axis=1), 0, atol=1e-9)
    assert np.linalg.eigvalsh(kc).min() > -1e-8


def test_projection_of_training_point():
    x = stream(4).normal(size=(10, 4))
    model = fit_kernel_pca(x, d=2)
    np.testing.assert_allclose(project(model, x[3]), model.training_projections()[3], atol=1e-8)
    with pytest.raises(InvalidDimensionError):
        project(model, np.zeros(3))


def test_translation_invariance():
    x = stream(5).normal(size=(10, 4))
    a = fit_kernel_pca(x, gamma=0.3, d=2).training_projections()
    b = fit_kernel_pca(x + 5.0, gamma=0.3, d=2).training_projections()
    np.testing.assert_allclose(a, b, atol=1e-8)


def test_permutation_equivariance():
    x = stream(6).normal(size=(10, 4))
    perm = stream(7).permutation(10)
    a = fit_kernel_pca(x, gamma=0.3, d=1).training_projections()
    b = fit_kernel_pca(x[perm], gamma=0.3, d=1).training_projections()
    np.testing.assert_allclose(align(a[perm], b), b, atol=1e-8)


def test_degenerate_features(caplog):
    x = np.ones((5, 4))
    model = fit_kernel_pca(x, d=1)
    assert model.rank == 0
    np.testing.assert_array_equal(model.training_projections(), 0)
    assert "rank 0" in caplog.text
    with pytest.raises(DegenerateError):
        classify_by_split(model.training_projections()[:, 0])


def test_split_examples():
    np.testing.assert_array_equal(classify_by_split([-1, -0.9, 0.9, 1]), [0, 0, 1, 1])
    assert split_threshold([-2, -1, 1, 2]) == 0


def test_score_accuracy():
    assert score_accuracy([1, 1, 0, 0], [0, 0, 1, 1]) == 1.0
    labels = stream(8).integers(0, 2, 10_000)
    truth = stream(9).integers(0, 2, 10_000)
    assert abs(score_accuracy(labels, truth) - 0.5) < 0.02
    with pytest.raises(ValidationError):
        score_accuracy([1, 0], [1])


@settings(max_examples=25, deadline=None)
@given(arrays(float, (6, 3), elements=st.floats(-3, 3)), st.floats(0.05, 2.0))
def test_kernel_symmetric_psd(x, gamma):
    k = gaussian_kernel(x, x, gamma)
    np.testing.assert_allclose(k, k.T, atol=1e-12)
    assert np.linalg.eigvalsh(center_kernel(k)).min() > -1e-8


@pytest.fixture(scope="module")
def qe_classes():
    n = 4
    gate = compile_tsym_gate_retrying(stream(300)).matrix
    circuits = [
        generate_1d_circuit(n, n, sym, stream(301, sym, j), tsym_gate=gate, seed=j)
        for sym in ("general", "t_symmetric")
        for j in range(30)
    ]
    return n, circuits, np.repeat([0, 1], 30)


def _accuracy(n, circuits, truth, reps, seed):
    cfg = DynamicsExperimentConfig(n, n, reps, QUANTUM_ENHANCED)
    feats = [build_features(run_dynamics(c, cfg, stream(seed, i))) for i, c in enumerate(circuits)]
    coords = fit_kernel_pca(feats, d=1).training_projections()[:, 0]
    return score_accuracy(classify_by_split(coords), truth), coords


def test_classes_separate_into_disjoint_intervals(qe_classes):
    n, circuits, truth = qe_classes
    acc, coords = _accuracy(n, circuits, truth, 1000, 302)
    a, b = coords[truth == 0], coords[truth == 1]
    assert acc == 1.0
    assert a.max() < b.min() or b.max() < a.min()


def test_accuracy_non_decreasing_in_repetitions(qe_classes):
    n, circuits, truth = qe_classes
    accs = [_accuracy(n, circuits, truth, r, 303)[0] for r in (50, 200, 1000)]
    slack = 2 * np.sqrt(0.25 / len(truth))
    assert all(b >= a - slack for a, b in zip(accs, accs[1:]))

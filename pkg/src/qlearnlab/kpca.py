"""Per-circuit bit statistics, Gaussian-kernel PCA and the midpoint split classifier."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, InvalidDimensionError, ValidationError

log = logging.getLogger(__name__)

_EIG_TOL = 1e-10


def build_features(m) -> np.ndarray:
    """Per-bit mean followed by per-bit (population) variance; length 2 * width."""
    rows = np.asarray(getattr(m, "rows", m), dtype=float)
    if rows.ndim != 2 or rows.shape[0] < 2:
        raise ValidationError("need at least two repetitions to build features")
    mean = rows.mean(axis=0)
    var = ((rows - mean) ** 2).mean(axis=0)
    return np.concatenate([mean, var])


def gaussian_kernel(a: np.ndarray, b: np.ndarray, gamma: float) -> np.ndarray:
    sq = (a**2).sum(1)[:, None] + (b**2).sum(1)[None, :] - 2 * a @ b.T
    return np.exp(-gamma * np.maximum(sq, 0.0))


def median_gamma(features: np.ndarray) -> float:
    """1 / (2 l * median pairwise squared distance), with l the bit width."""
    x = np.asarray(features, dtype=float)
    sq = ((x[:, None, :] - x[None, :, :]) ** 2).sum(-1)
    med = np.median(sq[np.triu_indices(len(x), k=1)])
    if med <= 0:
        positive = sq[sq > 0]
        if positive.size == 0:
            return 1.0
        med = np.median(positive)
    width = x.shape[1] // 2
    return 1.0 / (2 * width * med)


@dataclass
class KernelModel:
    gamma: float
    train: np.ndarray
    eigenvalues: np.ndarray  # top-d eigenvalues of the centered kernel, descending
    eigenvectors: np.ndarray  # (count, d), unit norm
    alphas: np.ndarray  # eigenvectors / sqrt(eigenvalue); zero for null directions
    train_kernel: np.ndarray
    d: int

    @property
    def rank(self) -> int:
        return int(np.sum(self.eigenvalues > _EIG_TOL))

    def training_projections(self) -> np.ndarray:
        return center_kernel(self.train_kernel) @ self.alphas


def center_kernel(k: np.ndarray) -> np.ndarray:
    row = k.mean(axis=0, keepdims=True)
    col = k.mean(axis=1, keepdims=True)
    return k - row - col + k.mean()


def fit_kernel_pca(features, gamma: float | None = None, d: int = 1) -> KernelModel:
    x = np.asarray([np.asarray(f, dtype=float) for f in features])
    if x.ndim != 2 or len(x) < 2:
        raise ValidationError("kernel PCA needs at least two equal-length feature vectors")
    if not 1 <= d <= len(x):
        raise ValidationError(f"d must be in 1..{len(x)}")
    if gamma is None:
        gamma = median_gamma(x)
    k = gaussian_kernel(x, x, gamma)
    kc = center_kernel(k)
    vals, vecs = np.linalg.eigh((kc + kc.T) / 2)
    order = np.argsort(vals)[::-1][:d]
    vals, vecs = vals[order], vecs[:, order]
    # deterministic sign: largest-magnitude entry positive
    flip = np.sign(vecs[np.argmax(np.abs(vecs), axis=0), np.arange(d)])
    vecs = vecs * np.where(flip == 0, 1, flip)
    alphas = np.zeros_like(vecs)
    good = vals > _EIG_TOL
    alphas[:, good] = vecs[:, good] / np.sqrt(vals[good])
    model = KernelModel(float(gamma), x, vals, vecs, alphas, k, d)
    if model.rank == 0:
        log.error("kernel PCA is rank 0 (all feature vectors coincide); projections are zero")
    return model


def project(model: KernelModel, f) -> np.ndarray:
    """Out-of-sample projection onto the retained components."""
    f = np.atleast_2d(np.asarray(f, dtype=float))
    if f.shape[1] != model.train.shape[1]:
        raise InvalidDimensionError("feature length does not match the fitted model")
    k = gaussian_kernel(f, model.train, model.gamma)
    kt = model.train_kernel
    kc = k - k.mean(axis=1, keepdims=True) - kt.mean(axis=0, keepdims=True) + kt.mean()
    out = kc @ model.alphas
    return out[0] if out.shape[0] == 1 else out


def split_threshold(coords) -> float:
    c = np.asarray(coords, dtype=float)
    return float((c.min() + c.max()) / 2)


def classify_by_split(coords) -> np.ndarray:
    """Label points by side of the midrange threshold (1 = above)."""
    c = np.asarray(coords, dtype=float).ravel()
    if c.size < 2:
        raise ValidationError("need at least two points to split")
    if np.ptp(c) == 0:
        raise DegenerateError("all coordinates coincide; no split exists")
    return (c > split_threshold(c)).astype(int)


def score_accuracy(labels, truth) -> float:
    """Fraction correct under the better of the two label polarities."""
    labels = np.asarray(labels).ravel()
    truth = np.asarray(truth).ravel()
    if labels.shape != truth.shape:
        raise ValidationError("labels and truth differ in length")
    if labels.size == 0:
        raise ValidationError("empty labelling")
    match = float(np.mean(labels == truth))
    return max(match, 1.0 - match)

"""Closed-form sample-complexity lower bounds.

All logarithms are natural: the underlying derivations rely on
``log(1 - x) >= -2.1 x`` and ``exp`` identities.  Values are returned
unrounded.
"""
from __future__ import annotations

import math

from .errors import ValidationError

# constant from bounding log(1 - x) over the relevant range
_KAPPA = 0.8505


def _check_delta(delta: float):
    # delta = 1/2 is admitted as the trivial endpoint where the bound is 0
    if not 0 < delta <= 0.5:
        raise ValidationError(f"delta must lie in (0, 1/2], got {delta}")


def lb_predict_abs(n: int, delta: float) -> float:
    """Experiments needed to predict |tr(P rho)| with failure probability delta."""
    _check_delta(delta)
    return (2**n + 1) / _KAPPA * math.log(1 / (2 * delta))


def lb_compare_abs(n: int, delta: float) -> float:
    """Conventional lower bound for the compare-absolute-values task."""
    _check_delta(delta)
    return (2**n + 1) / _KAPPA * math.log(2 / (1 + 2 * delta))


def lb_qpca(n: int) -> float:
    """Conventional lower bound for distinguishing the two principal-component hypotheses."""
    if n < 2:
        raise ValidationError("n must be >= 2")
    return 1 + math.sqrt(math.log(10 / 7) / 2) * 2 ** (n / 2)


def lb_bounded_memory(n: int, k: int, p: float) -> float:
    """Copies needed with k qubits of quantum memory to succeed with probability p."""
    if not 0 <= k <= n:
        raise ValidationError("need 0 <= k <= n")
    if not 0.5 < p < 1:
        raise ValidationError("success probability must lie in (1/2, 1)")
    four_n = 4.0**n
    per_copy = 2 ** (-(n - k) / 3) * (1 + math.sqrt(four_n / (four_n - 1)))
    return (2 * p - 1) / per_copy


BOUNDS = {
    "lb_predict_abs": lb_predict_abs,
    "lb_compare_abs": lb_compare_abs,
    "lb_qpca": lb_qpca,
    "lb_bounded_memory": lb_bounded_memory,
}

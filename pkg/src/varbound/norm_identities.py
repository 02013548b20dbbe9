"""Parallelogram-type norm identities behind the variance bounds.

Each function returns ``(lhs, rhs)`` for a tuple of vectors so callers can
check the identity at whatever tolerance they need. Vectors may be real or
complex; they are the rows of ``vectors``.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np


def _rows(vectors) -> np.ndarray:
    a = np.asarray(vectors)
    if a.ndim != 2 or a.shape[0] < 2:
        raise ValueError(f"need at least two vectors as rows, got shape {a.shape}")
    return a


def _sq(v: np.ndarray) -> float:
    return float(np.vdot(v, v).real)


def parallelogram_law(vectors) -> tuple[float, float]:
    """``(2N-2) sum ||a_i||^2`` versus ``sum_{i<j} ||a_i+a_j||^2 + ||a_i-a_j||^2``."""
    a = _rows(vectors)
    n = a.shape[0]
    lhs = (2 * n - 2) * sum(_sq(v) for v in a)
    rhs = sum(_sq(a[i] + a[j]) + _sq(a[i] - a[j]) for i, j in combinations(range(n), 2))
    return lhs, rhs


def parameterized_parallelogram(vectors, alpha: float, x: int, y: int) -> tuple[float, float]:
    """Weighted parallelogram equality with free weight ``alpha`` and branch ``(x, y)``."""
    a = _rows(vectors)
    n = a.shape[0]
    p, q = alpha ** (1 - x), alpha**x
    s = (-1) ** y
    total = 0.0
    for i, j in combinations(range(n), 2):
        total += _sq(p * a[i] + s * q * a[j]) + _sq(q * a[i] - s * p * a[j])
    lhs = sum(_sq(v) for v in a)
    return lhs, total / ((1 + alpha**2) * (n - 1))


def pair_sum_identities(vectors) -> tuple[tuple[float, float], tuple[float, float]]:
    """Pairwise sums and differences expressed through ``||sum a_i||``.

    Returns ``((plus_lhs, plus_rhs), (minus_lhs, minus_rhs))``.
    """
    a = _rows(vectors)
    n = a.shape[0]
    norms = sum(_sq(v) for v in a)
    total = _sq(a.sum(axis=0))
    pairs = list(combinations(range(n), 2))
    plus = sum(_sq(a[i] + a[j]) for i, j in pairs)
    minus = sum(_sq(a[i] - a[j]) for i, j in pairs)
    return (plus, total + (n - 2) * norms), (minus, n * norms - total)


def weighted_parallelogram(vectors, alpha: float, beta: float) -> tuple[float, float]:
    """Two-weight identity, valid for any real ``alpha`` and ``beta``."""
    a = _rows(vectors)
    n = a.shape[0]
    pairs = list(combinations(range(n), 2))
    lhs = (alpha * n + (n - 2) * beta) * sum(_sq(v) for v in a)
    rhs = (
        beta * sum(_sq(a[i] + a[j]) for i, j in pairs)
        + alpha * sum(_sq(a[i] - a[j]) for i, j in pairs)
        + (alpha - beta) * _sq(a.sum(axis=0))
    )
    return lhs, rhs

"""Quantum variances of observables and of their real linear combinations."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ConsistencyError, DimensionMismatch, IndexOutOfRange, LengthMismatch
from .linalg_core import (
    DensityMatrix,
    Observable,
    ObservableSet,
    kron,
    matrix_sqrt_psd,
    vectorize,
)

IMAG_TOL = 1e-10
NEG_VARIANCE_TOL = 1e-12


def _check_dims(rho: DensityMatrix, d: int) -> None:
    if rho.dim != d:
        raise DimensionMismatch(f"state has dimension {rho.dim}, observable {d}")


def _scale(x: np.ndarray) -> np.ndarray:
    return np.maximum(1.0, np.abs(x))


def _clamp(raw: np.ndarray, scale: np.ndarray) -> np.ndarray:
    # rounding residue scales with Tr(rho A^2)
    if np.any(raw < -NEG_VARIANCE_TOL * scale):
        raise ConsistencyError(f"variance {np.min(raw):.3e} is negative beyond rounding")
    return np.maximum(raw, 0.0)


def batch_means(rho: DensityMatrix, stack: np.ndarray) -> np.ndarray:
    """``Re Tr(rho M)`` for every matrix in a ``(..., d, d)`` stack."""
    stack = np.asarray(stack)
    _check_dims(rho, stack.shape[-1])
    tr = np.einsum("ij,...ji->...", rho.matrix, stack)
    if np.any(np.abs(tr.imag) > IMAG_TOL * _scale(tr.real)):
        raise ConsistencyError("Tr(rho A) has a non-negligible imaginary part")
    return tr.real


def batch_variances(rho: DensityMatrix, stack: np.ndarray) -> np.ndarray:
    """Variances ``Tr(rho M^2) - Tr(rho M)^2`` over a stack of Hermitian matrices.

    Works on any leading shape, so many combined observables can be handled
    in one call.
    """
    stack = np.asarray(stack)
    mean = batch_means(rho, stack)
    second = np.einsum("ij,...jk,...ki->...", rho.matrix, stack, stack).real
    return _clamp(second - mean**2, _scale(second))


def mean_value(rho: DensityMatrix, a: Observable) -> float:
    return float(batch_means(rho, a.matrix))


def variance(rho: DensityMatrix, a: Observable) -> float:
    return float(batch_variances(rho, a.matrix))


def stddev(rho: DensityMatrix, a: Observable) -> float:
    return float(np.sqrt(variance(rho, a)))


def linear_combo(coeffs: Sequence[float], obs: ObservableSet, subset: Sequence[int]) -> Observable:
    """The observable ``sum_k coeffs[k] * obs[subset[k]]``."""
    if len(coeffs) != len(subset):
        raise LengthMismatch(f"{len(coeffs)} coefficients for {len(subset)} indices")
    for i in subset:
        if not 0 <= i < len(obs):
            raise IndexOutOfRange(f"index {i} outside 0..{len(obs) - 1}")
    m = np.zeros((obs.dim, obs.dim), dtype=complex)
    for c, i in zip(coeffs, subset):
        m = m + float(c) * obs.stack[i]
    m.setflags(write=False)
    terms = " + ".join(f"{float(c):g}*{obs[i].label or f'A{i + 1}'}" for c, i in zip(coeffs, subset))
    return Observable(m, terms)


def variance_via_vectorization(rho: DensityMatrix, a: Observable) -> float:
    """Variance as ``||(I (x) dA) |sqrt(rho)>||^2`` with ``dA = A - <A> I``.

    Independent of :func:`variance`; used to cross-check it.
    """
    d = a.dim
    _check_dims(rho, d)
    mean = np.trace(rho.matrix @ a.matrix).real
    delta = a.matrix - mean * np.eye(d)
    vec = kron(np.eye(d), delta) @ vectorize(matrix_sqrt_psd(rho))
    return float(np.vdot(vec, vec).real)

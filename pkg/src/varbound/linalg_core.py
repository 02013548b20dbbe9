"""Complex matrix primitives and validated quantum objects.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The validated
wrappers (:class:`Observable`, :class:`DensityMatrix`, :class:`ObservableSet`)
hold read-only copies so they can be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    LengthMismatch,
    NotHermitian,
    NotNormalized,
    NotPSD,
    NotSquare,
    NotUnitTrace,
)

HERM_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
EIG_TOL = 1e-9
SQRT_TOL = 1e-9
EIGVEC_TOL = 1e-9
NORM_TOL = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def as_square(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise NotSquare(f"expected a non-empty square matrix, got shape {a.shape}")
    return a


def hermitian_deviation(m) -> float:
    """Max-abs entry of ``M - M^dagger``."""
    a = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(a - a.conj().T)))


def _check_hermitian(a: np.ndarray) -> None:
    dev = hermitian_deviation(a)
    scale = float(np.max(np.abs(a)))
    if dev > HERM_TOL * scale:
        raise NotHermitian(dev)


@dataclass(frozen=True, eq=False)
class Observable:
    matrix: np.ndarray
    label: str = ""

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self) -> str:
        return f"Observable(dim={self.dim}, label={self.label!r})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class ObservableSet:
    """Ordered tuple of at least two observables of a common dimension."""

    members: tuple[Observable, ...]
    stack: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        members = tuple(self.members)
        if len(members) < 2:
            raise LengthMismatch(f"need at least 2 observables, got {len(members)}")
        dims = {m.dim for m in members}
        if len(dims) != 1:
            raise DimensionMismatch(f"observables have differing dimensions {sorted(dims)}")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "stack", _frozen(np.stack([m.matrix for m in members])))

    @property
    def dim(self) -> int:
        return self.members[0].dim

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Observable]:
        return iter(self.members)

    def __getitem__(self, i: int) -> Observable:
        return self.members[i]

    def permuted(self, order: Sequence[int]) -> "ObservableSet":
        return ObservableSet(tuple(self.members[i] for i in order))

    def __repr__(self) -> str:
        labels = ", ".join(m.label or "?" for m in self.members)
        return f"ObservableSet(dim={self.dim}, [{labels}])"


def validate_observable(m, label: str = "") -> Observable:
    """Check ``m`` is Hermitian and return it, symmetrized, as an Observable."""
    a = as_square(m)
    _check_hermitian(a)
    return Observable(_frozen((a + a.conj().T) / 2), label)


def observable_set(observables: Sequence) -> ObservableSet:
    """Build an ObservableSet from Observables or raw matrices."""
    members = []
    for k, obs in enumerate(observables):
        if not isinstance(obs, Observable):
            obs = validate_observable(obs, f"A{k + 1}")
        members.append(obs)
    return ObservableSet(tuple(members))


def eig_hermitian(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors (as columns)."""
    if isinstance(m, (Observable, DensityMatrix)):
        m = m.matrix
    a = as_square(m)
    _check_hermitian(a)
    try:
        w, v = np.linalg.eigh((a + a.conj().T) / 2)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return w, v


def validate_density(m) -> DensityMatrix:
    """Check Hermiticity, unit trace and positivity.

    Eigenvalues in ``[-PSD_TOL, 0)`` are clipped to zero and the matrix is
    rebuilt from its eigendecomposition.
    """
    a = as_square(m)
    _check_hermitian(a)
    tr = np.trace(a)
    if abs(tr - 1) > TRACE_TOL:
        raise NotUnitTrace(complex(tr))
    w, v = eig_hermitian(a)
    if w[0] < -PSD_TOL:
        raise NotPSD(float(w[0]))
    a = (a + a.conj().T) / 2
    if w[0] < 0:
        w = np.clip(w, 0.0, None)
        a = (v * w) @ v.conj().T
    return DensityMatrix(_frozen(a))


def matrix_sqrt_psd(rho: DensityMatrix) -> np.ndarray:
    """Hermitian PSD square root of a density matrix."""
    w, v = eig_hermitian(rho.matrix)
    s = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return (s + s.conj().T) / 2


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def vectorize(g) -> np.ndarray:
    """Stack the columns of ``g`` into one vector (column-major order)."""
    a = np.asarray(g, dtype=complex)
    if a.ndim != 2:
        raise NotSquare(f"expected a 2-D matrix, got shape {a.shape}")
    return a.reshape(-1, order="F")


def is_common_eigenvector(obs: ObservableSet, psi) -> bool:
    """True iff ``psi`` is an eigenvector of every member of ``obs``."""
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.shape[0] != obs.dim:
        raise DimensionMismatch(f"state has dimension {psi.shape[0]}, observables {obs.dim}")
    if abs(np.linalg.norm(psi) - 1) > NORM_TOL:
        raise NotNormalized(f"state norm is {np.linalg.norm(psi)}")
    for a in obs.stack:
        a_psi = a @ psi
        residual = a_psi - np.vdot(psi, a_psi) * psi
        if np.linalg.norm(residual) > EIGVEC_TOL:
            return False
    return True


def pure_state(psi) -> DensityMatrix:
    """Density matrix of a normalized state vector."""
    psi = np.asarray(psi, dtype=complex).ravel()
    if abs(np.linalg.norm(psi) - 1) > NORM_TOL:
        raise NotNormalized(f"state norm is {np.linalg.norm(psi)}")
    return validate_density(np.outer(psi, psi.conj()))

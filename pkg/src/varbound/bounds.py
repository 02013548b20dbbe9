"""Lower bounds on the sum of variances of N observables.

Families:

* ``SONG``   -- variance of the total plus pairwise-difference deviations.
* ``ZHANG``  -- pairwise sums/differences, maximized over one sign branch.
* ``LB1``    -- one-parameter family with weight ``alpha >= 0`` and branches
  ``(x, y)``; reduces to ``ZHANG`` at ``alpha = 1``.
* ``LB1_PI`` -- ``LB1`` maximized over all orderings of the observables.
* ``THM2_X``, ``THM2_Y``, ``THM2_Z`` and their maximum ``LB2`` -- two-weight
  family with ``alpha, beta > 0``; ``Z`` only exists for ``beta > alpha``.

Every deviation of a combined observable is computed by building that
observable explicitly and taking its variance.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass
from functools import lru_cache
from itertools import permutations
from typing import Optional

import numpy as np

from .errors import (
    ConsistencyError,
    DimensionMismatch,
    NegativeAlpha,
    NonPositiveParameter,
    TooManyObservables,
)
from .linalg_core import DensityMatrix, ObservableSet
from .variance import batch_variances

PERM_MAX = 7
BRANCHES = ((0, 0), (0, 1), (1, 0), (1, 1))


class Family(str, enum.Enum):
    SUM = "SUM"
    SONG = "SONG"
    ZHANG = "ZHANG"
    LB1 = "LB1"
    LB1_PI = "LB1_PI"
    THM2_X = "THM2_X"
    THM2_Y = "THM2_Y"
    THM2_Z = "THM2_Z"
    LB2 = "LB2"


@dataclass(frozen=True)
class BranchChoice:
    x: int
    y: int

    def __post_init__(self):
        if self.x not in (0, 1) or self.y not in (0, 1):
            raise ValueError(f"branch indices must be 0 or 1, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class BoundEvaluation:
    """Value of one bound family and the choices that produced it.

    ``member`` is set only for ``LB2`` and names which of X, Y, Z won.
    """

    family: Family
    value: float
    alpha: Optional[float] = None
    beta: Optional[float] = None
    branch: Optional[BranchChoice] = None
    permutation: Optional[tuple[int, ...]] = None
    member: Optional[Family] = None

    def to_dict(self) -> dict:
        out = asdict(self)
        out["family"] = self.family.value
        out["member"] = self.member.value if self.member else None
        out["permutation"] = list(self.permutation) if self.permutation is not None else None
        return out


def _nonneg(value: float, scale: float) -> float:
    # the families are provably >= 0; allow rounding residue only
    if value < -1e-12 * max(1.0, scale):
        raise ConsistencyError(f"bound evaluated to {value:.3e}")
    return max(float(value), 0.0)


@lru_cache(maxsize=None)
def _pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    i, j = np.triu_indices(n, k=1)
    return i, j


def _check_dims(rho: DensityMatrix, obs: ObservableSet) -> None:
    if rho.dim != obs.dim:
        raise DimensionMismatch(f"state has dimension {rho.dim}, observables {obs.dim}")


def _combo_variances(rho: DensityMatrix, obs: ObservableSet, ci, cj, first=None, second=None) -> np.ndarray:
    """Variances of ``ci * A_first + cj * A_second`` over broadcast coefficient arrays.

    ``first``/``second`` index the observables; by default all pairs ``i < j``.
    The trailing axis of the result runs over the pairs.
    """
    if first is None:
        first, second = _pairs(len(obs))
    ai = obs.stack[first]
    aj = obs.stack[second]
    ci = np.asarray(ci, dtype=float)[..., None, None, None]
    cj = np.asarray(cj, dtype=float)[..., None, None, None]
    return batch_variances(rho, ci * ai + cj * aj)


def sum_variances(rho: DensityMatrix, obs: ObservableSet) -> float:
    _check_dims(rho, obs)
    return float(batch_variances(rho, obs.stack).sum())


def _total_variance(rho: DensityMatrix, obs: ObservableSet) -> float:
    return float(batch_variances(rho, obs.stack.sum(axis=0)))


def song_bound(rho: DensityMatrix, obs: ObservableSet) -> BoundEvaluation:
    _check_dims(rho, obs)
    n = len(obs)
    dev_minus = np.sqrt(_combo_variances(rho, obs, 1.0, -1.0))
    value = _total_variance(rho, obs) / n + 2.0 / (n * n * (n - 1)) * dev_minus.sum() ** 2
    return BoundEvaluation(Family.SONG, float(value))


def zhang_bound(rho: DensityMatrix, obs: ObservableSet) -> BoundEvaluation:
    """Maximum over ``x`` of the pairwise sum/difference bound; ties go to ``x = 0``."""
    _check_dims(rho, obs)
    n = len(obs)
    best = None
    for x in (0, 1):
        s = (-1.0) ** x
        first = np.sqrt(_combo_variances(rho, obs, 1.0, s))
        second = _combo_variances(rho, obs, 1.0, -s)
        value = (2.0 / (n * (n - 1)) * first.sum() ** 2 + second.sum()) / (2 * n - 2)
        if best is None or value > best[0]:
            best = (float(value), x)
    return BoundEvaluation(Family.ZHANG, best[0], branch=BranchChoice(best[1], 0))


def _branch_coefficients(alphas: np.ndarray):
    """Coefficient arrays of shape ``(len(alphas), 4)`` for both combinations.

    The first combination is ``a^(1-x) A_i + (-1)^y a^x A_j``, the second
    ``a^x A_i + (-1)^(1-y) a^(1-x) A_j``. ``0**0`` evaluates to 1.
    """
    a = np.asarray(alphas, dtype=float)[:, None]
    x = np.array([b[0] for b in BRANCHES], dtype=float)
    sign = np.array([(-1.0) ** b[1] for b in BRANCHES])
    p = np.power(a, 1 - x)
    q = np.power(a, x)
    return (p, sign * q), (q, -sign * p)


def _check_alphas(alphas: np.ndarray) -> None:
    if np.any(~np.isfinite(alphas)) or np.any(alphas < 0):
        raise NegativeAlpha(f"alpha must be a finite non-negative number, got {alphas}")


_CHUNK = 64


def lb1_table(rho: DensityMatrix, obs: ObservableSet, alphas) -> np.ndarray:
    """LB1 value for every alpha and branch, shape ``(len(alphas), 4)``.

    Branch columns are ordered ``(0,0), (0,1), (1,0), (1,1)``.
    """
    _check_dims(rho, obs)
    alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
    _check_alphas(alphas)
    n = len(obs)
    out = np.empty((alphas.size, len(BRANCHES)))
    for start in range(0, alphas.size, _CHUNK):
        a = alphas[start : start + _CHUNK]
        (p1, q1), (p2, q2) = _branch_coefficients(a)
        first = np.sqrt(_combo_variances(rho, obs, p1, q1)).sum(axis=-1)
        second = _combo_variances(rho, obs, p2, q2).sum(axis=-1)
        pref = 1.0 / ((1.0 + a[:, None] ** 2) * (n - 1))
        out[start : start + _CHUNK] = pref * (2.0 / (n * (n - 1)) * first**2 + second)
    return out


def lb1(rho: DensityMatrix, obs: ObservableSet, alpha: float) -> BoundEvaluation:
    """Branch-maximized LB1 at one alpha; ties go to the smallest ``(x, y)``."""
    row = lb1_table(rho, obs, [alpha])[0]
    k = int(np.argmax(row))
    return BoundEvaluation(Family.LB1, float(row[k]), alpha=float(alpha), branch=BranchChoice(*BRANCHES[k]))


@lru_cache(maxsize=None)
def _perm_table(n: int) -> np.ndarray:
    return np.array(list(permutations(range(n))), dtype=np.intp)


def lb1_permuted_table(rho: DensityMatrix, obs: ObservableSet, alphas) -> np.ndarray:
    """LB1 for every alpha, ordering and branch, shape ``(len(alphas), n!, 4)``.

    Orderings follow ``itertools.permutations(range(n))`` (identity first).
    """
    _check_dims(rho, obs)
    n = len(obs)
    if n > PERM_MAX:
        raise TooManyObservables(f"{n} observables exceeds the exhaustive limit of {PERM_MAX}")
    alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
    _check_alphas(alphas)
    perms = _perm_table(n)
    i, j = _pairs(n)
    pk, pl = perms[:, i], perms[:, j]
    # deviations for every ordered pair (k, l), shared by all permutations
    k, l = np.nonzero(~np.eye(n, dtype=bool))
    chunk = max(1, 2_000_000 // (len(BRANCHES) * perms.size))
    out = np.empty((alphas.size, len(perms), len(BRANCHES)))
    for start in range(0, alphas.size, chunk):
        a = alphas[start : start + chunk]
        (p1, q1), (p2, q2) = _branch_coefficients(a)
        first = np.zeros((a.size, len(BRANCHES), n, n))
        second = np.zeros((a.size, len(BRANCHES), n, n))
        first[..., k, l] = np.sqrt(_combo_variances(rho, obs, p1, q1, k, l))
        second[..., k, l] = _combo_variances(rho, obs, p2, q2, k, l)
        s_first = first[:, :, pk, pl].sum(axis=-1)
        s_second = second[:, :, pk, pl].sum(axis=-1)
        pref = 1.0 / ((1.0 + a[:, None, None] ** 2) * (n - 1))
        values = pref * (2.0 / (n * (n - 1)) * s_first**2 + s_second)
        out[start : start + chunk] = values.transpose(0, 2, 1)
    return out


def lb1_permuted(rho: DensityMatrix, obs: ObservableSet, alpha: float) -> BoundEvaluation:
    """LB1 maximized over all orderings of the observables.

    Ties go to the lexicographically first permutation, then the smallest branch.
    """
    table = lb1_permuted_table(rho, obs, [alpha])[0]
    flat = int(np.argmax(table))
    p, b = divmod(flat, len(BRANCHES))
    perm = tuple(int(v) for v in _perm_table(len(obs))[p])
    return BoundEvaluation(
        Family.LB1_PI,
        float(table[p, b]),
        alpha=float(alpha),
        branch=BranchChoice(*BRANCHES[b]),
        permutation=perm,
    )


@dataclass(frozen=True)
class PairStats:
    """Parameter-free ingredients of the two-weight family.

    ``dev_plus``/``dev_minus`` are the deviations of ``A_i + A_j`` and
    ``A_i - A_j`` over pairs ``i < j``; ``var_total`` is the variance of
    the sum of all observables.
    """

    n: int
    dev_plus: np.ndarray
    dev_minus: np.ndarray
    var_total: float

    @property
    def sum_sq_plus(self) -> float:
        return float(np.sum(self.dev_plus**2))

    @property
    def sum_sq_minus(self) -> float:
        return float(np.sum(self.dev_minus**2))

    @property
    def sum_plus(self) -> float:
        return float(np.sum(self.dev_plus))

    @property
    def sum_minus(self) -> float:
        return float(np.sum(self.dev_minus))


def pair_stats(rho: DensityMatrix, obs: ObservableSet) -> PairStats:
    _check_dims(rho, obs)
    v = _combo_variances(rho, obs, np.array([1.0, 1.0]), np.array([1.0, -1.0]))
    return PairStats(len(obs), np.sqrt(v[0]), np.sqrt(v[1]), _total_variance(rho, obs))


def _check_weights(alpha, beta) -> None:
    a, b = np.asarray(alpha, dtype=float), np.asarray(beta, dtype=float)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b)) and np.all(a > 0) and np.all(b > 0)):
        raise NonPositiveParameter(f"alpha and beta must be positive, got ({alpha}, {beta})")


def _thm2_raw(stats: PairStats, alpha, beta):
    """X, Y, Z for (broadcast) weight arrays; Z is computed everywhere, valid only where beta > alpha."""
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    n = stats.n
    den = alpha * n + (n - 2) * beta
    cs = 2.0 / (n * (n - 1))
    shift = (alpha - beta) * stats.var_total
    x = (beta * cs * stats.sum_plus**2 + alpha * stats.sum_sq_minus + shift) / den
    y = (alpha * cs * stats.sum_minus**2 + beta * stats.sum_sq_plus + shift) / den
    z = (
        beta * stats.sum_sq_plus
        + alpha * stats.sum_sq_minus
        + (alpha - beta) / (n - 1) ** 2 * stats.sum_plus**2
    ) / den
    mag = stats.sum_sq_plus + stats.sum_sq_minus + stats.var_total
    return x, y, z, mag


def thm2_values(stats: PairStats, alpha: float, beta: float) -> tuple[float, float, Optional[float]]:
    """``(X, Y, Z)`` at one weight pair; ``Z`` is None unless ``beta > alpha``."""
    _check_weights(alpha, beta)
    x, y, z, mag = _thm2_raw(stats, alpha, beta)
    zv = _nonneg(float(z), mag) if beta > alpha else None
    return _nonneg(float(x), mag), _nonneg(float(y), mag), zv


def lb2_values(stats: PairStats, alphas, betas) -> np.ndarray:
    """LB2 over broadcast weight arrays."""
    _check_weights(alphas, betas)
    x, y, z, mag = _thm2_raw(stats, alphas, betas)
    z = np.where(np.asarray(betas) > np.asarray(alphas), z, -np.inf)
    best = np.maximum(np.maximum(x, y), z)
    if np.any(best < -1e-12 * max(1.0, mag)):
        raise ConsistencyError(f"LB2 evaluated to {np.min(best):.3e}")
    return np.maximum(best, 0.0)


def thm2_bounds(
    rho: DensityMatrix, obs: ObservableSet, alpha: float, beta: float
) -> tuple[BoundEvaluation, BoundEvaluation, Optional[BoundEvaluation]]:
    x, y, z = thm2_values(pair_stats(rho, obs), alpha, beta)
    a, b = float(alpha), float(beta)
    ex = BoundEvaluation(Family.THM2_X, x, alpha=a, beta=b)
    ey = BoundEvaluation(Family.THM2_Y, y, alpha=a, beta=b)
    ez = BoundEvaluation(Family.THM2_Z, z, alpha=a, beta=b) if z is not None else None
    return ex, ey, ez


def _lb2_from_values(x: float, y: float, z: Optional[float], alpha: float, beta: float) -> BoundEvaluation:
    best, member = x, Family.THM2_X
    if y > best:
        best, member = y, Family.THM2_Y
    if z is not None and z > best:
        best, member = z, Family.THM2_Z
    return BoundEvaluation(Family.LB2, best, alpha=float(alpha), beta=float(beta), member=member)


def lb2(rho: DensityMatrix, obs: ObservableSet, alpha: float, beta: float) -> BoundEvaluation:
    """Maximum of X, Y and (when ``beta > alpha``) Z; ties go to X, then Y."""
    return _lb2_from_values(*thm2_values(pair_stats(rho, obs), alpha, beta), alpha, beta)


def lb2_from_stats(stats: PairStats, alpha: float, beta: float) -> BoundEvaluation:
    return _lb2_from_values(*thm2_values(stats, alpha, beta), alpha, beta)

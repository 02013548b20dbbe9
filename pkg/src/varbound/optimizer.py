"""Parameter search for the tightest LB1 / LB2 / LB1_PI value.

The free parameter is scanned on a log-uniform grid that always contains 1,
so the optimized LB1 and LB2 can never fall below the ZHANG bound (both
families reduce to it at parameter 1). An optional golden-section pass then
refines around the best grid point in log space. That pass assumes the
objective is unimodal near the grid maximum, which is not guaranteed; it
can only raise the reported value, never lower it.

LB2 depends on ``(alpha, beta)`` only through ``t = alpha / beta`` (numerator
and denominator are both degree-1 homogeneous), so it is optimized over
``t`` with ``beta = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bounds import (
    BRANCHES,
    PERM_MAX,
    BoundEvaluation,
    BranchChoice,
    Family,
    _perm_table,
    lb1_permuted_table,
    lb1_table,
    lb2_from_stats,
    lb2_values,
    pair_stats,
    song_bound,
    sum_variances,
    zhang_bound,
)
from .errors import InvalidGrid, TooManyObservables
from .linalg_core import DensityMatrix, ObservableSet

GOLDEN = (math.sqrt(5) - 1) / 2
REFINE_WIDTH = 1e-4


@dataclass(frozen=True)
class GridSpec:
    """Log-uniform grid ``2**k`` for ``k`` in ``[min_exponent, max_exponent]``."""

    min_exponent: int = -6
    max_exponent: int = 6
    points_per_octave: int = 20
    refine: bool = False
    scale: str = "log"

    def __post_init__(self):
        if self.scale != "log":
            raise InvalidGrid(f"only log-uniform grids are supported, got {self.scale!r}")
        if self.min_exponent >= self.max_exponent:
            raise InvalidGrid(
                f"min_exponent ({self.min_exponent}) must be below max_exponent ({self.max_exponent})"
            )
        if self.points_per_octave < 1:
            raise InvalidGrid(f"points_per_octave must be >= 1, got {self.points_per_octave}")

    def points(self) -> np.ndarray:
        """Ascending grid values, with 1 inserted if the range misses it."""
        k = np.arange(self.min_exponent * self.points_per_octave, self.max_exponent * self.points_per_octave + 1)
        pts = 2.0 ** (k / self.points_per_octave)
        if not np.any(pts == 1.0):
            pts = np.sort(np.append(pts, 1.0))
        return pts

    def to_dict(self) -> dict:
        return {
            "scale": self.scale,
            "min_exponent": self.min_exponent,
            "max_exponent": self.max_exponent,
            "points_per_octave": self.points_per_octave,
            "refine": self.refine,
        }


@dataclass(frozen=True)
class OptimizationResult:
    best: BoundEvaluation
    evaluations: int
    grid: GridSpec


def _golden_max(f: Callable[[float], float], lo: float, hi: float) -> tuple[float, float, int]:
    """Golden-section search for a maximum of ``f`` on ``[lo, hi]``.

    Returns ``(argmax, max, evaluations)`` over every point visited.
    """
    c = hi - GOLDEN * (hi - lo)
    d = lo + GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    evals = 2
    best = max((fc, -c), (fd, -d))
    while hi - lo >= REFINE_WIDTH:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - GOLDEN * (hi - lo)
            fc = f(c)
            best = max(best, (fc, -c))
        else:
            lo, c, fc = c, d, fd
            d = lo + GOLDEN * (hi - lo)
            fd = f(d)
            best = max(best, (fd, -d))
        evals += 1
    # ties prefer the smaller argument
    return -best[1], best[0], evals


def _search(grid: GridSpec, values: np.ndarray, f: Callable[[float], float]) -> tuple[float, float, int]:
    """Best ``(parameter, value, evaluations)`` over the grid, then optionally refined."""
    pts = grid.points()
    k = int(np.argmax(values))
    param, value = float(pts[k]), float(values[k])
    evals = len(pts)
    if grid.refine:
        lo = math.log(pts[max(k - 1, 0)])
        hi = math.log(pts[min(k + 1, len(pts) - 1)])
        u, v, n = _golden_max(lambda u: f(math.exp(u)), lo, hi)
        evals += n
        if v > value:
            param, value = math.exp(u), v
    return param, value, evals


def optimize_lb1(rho: DensityMatrix, obs: ObservableSet, grid: GridSpec | None = None) -> OptimizationResult:
    grid = grid or GridSpec()
    table = lb1_table(rho, obs, grid.points())

    def f(alpha: float) -> float:
        return float(lb1_table(rho, obs, [alpha])[0].max())

    alpha, _, evals = _search(grid, table.max(axis=1), f)
    row = lb1_table(rho, obs, [alpha])[0]
    b = int(np.argmax(row))
    best = BoundEvaluation(Family.LB1, float(row[b]), alpha=alpha, branch=BranchChoice(*BRANCHES[b]))
    return OptimizationResult(best, evals, grid)


def optimize_lb2(rho: DensityMatrix, obs: ObservableSet, grid: GridSpec | None = None) -> OptimizationResult:
    grid = grid or GridSpec()
    stats = pair_stats(rho, obs)

    def f(t: float) -> float:
        return lb2_from_stats(stats, t, 1.0).value

    values = lb2_values(stats, grid.points(), 1.0)
    t, _, evals = _search(grid, values, f)
    return OptimizationResult(lb2_from_stats(stats, t, 1.0), evals, grid)


def optimize_lb1_permuted(
    rho: DensityMatrix, obs: ObservableSet, grid: GridSpec | None = None
) -> OptimizationResult:
    grid = grid or GridSpec()
    if len(obs) > PERM_MAX:
        raise TooManyObservables(f"{len(obs)} observables exceeds the exhaustive limit of {PERM_MAX}")

    def f(alpha: float) -> float:
        return float(lb1_permuted_table(rho, obs, [alpha]).max())

    values = lb1_permuted_table(rho, obs, grid.points()).max(axis=(1, 2))
    alpha, _, evals = _search(grid, values, f)
    table = lb1_permuted_table(rho, obs, [alpha])[0]
    p, b = divmod(int(np.argmax(table)), len(BRANCHES))
    best = BoundEvaluation(
        Family.LB1_PI,
        float(table[p, b]),
        alpha=alpha,
        branch=BranchChoice(*BRANCHES[b]),
        permutation=tuple(int(v) for v in _perm_table(len(obs))[p]),
    )
    return OptimizationResult(best, evals, grid)


def compare_report(
    rho: DensityMatrix,
    obs: ObservableSet,
    grid: GridSpec | None = None,
    include_permutations: bool = False,
) -> list[BoundEvaluation]:
    """``[SUM, SONG, ZHANG, LB1, LB2]`` plus ``LB1_PI`` when requested."""
    grid = grid or GridSpec()
    if include_permutations and len(obs) > PERM_MAX:
        raise TooManyObservables(f"{len(obs)} observables exceeds the exhaustive limit of {PERM_MAX}")
    report = [
        BoundEvaluation(Family.SUM, sum_variances(rho, obs)),
        song_bound(rho, obs),
        zhang_bound(rho, obs),
        optimize_lb1(rho, obs, grid).best,
        optimize_lb2(rho, obs, grid).best,
    ]
    if include_permutations:
        report.append(optimize_lb1_permuted(rho, obs, grid).best)
    return report

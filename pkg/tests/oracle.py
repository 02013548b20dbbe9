"""Independent reference implementations used only by the tests.

Everything here goes through the vectorized square-root route
(``||(I (x) dM)|sqrt(rho)>||^2``) and explicit Python loops, so it shares no
code path with the batched evaluators in the package.
"""

import math
from itertools import combinations, permutations

import numpy as np
import scipy.linalg


def var(rho, m):
    rho = np.asarray(rho)
    m = np.asarray(m)
    d = m.shape[0]
    s = scipy.linalg.sqrtm(rho)
    mean = np.trace(rho @ m).real
    delta = m - mean * np.eye(d)
    vec = np.kron(np.eye(d), delta) @ s.reshape(-1, order="F")
    return float(np.vdot(vec, vec).real)


def dev(rho, m):
    return math.sqrt(max(var(rho, m), 0.0))


def total(rho, mats):
    return sum(var(rho, a) for a in mats)


def song(rho, mats):
    n = len(mats)
    s = sum(dev(rho, mats[i] - mats[j]) for i, j in combinations(range(n), 2))
    return var(rho, sum(mats)) / n + 2 / (n**2 * (n - 1)) * s**2


def zhang(rho, mats):
    n = len(mats)
    out = []
    for x in (0, 1):
        sg = (-1) ** x
        pairs = list(combinations(range(n), 2))
        first = sum(dev(rho, mats[i] + sg * mats[j]) for i, j in pairs)
        second = sum(var(rho, mats[i] - sg * mats[j]) for i, j in pairs)
        out.append((2 / (n * (n - 1)) * first**2 + second) / (2 * n - 2))
    return max(out)


def lb1(rho, mats, alpha):
    n = len(mats)
    pw = lambda b, e: 1.0 if e == 0 else b**e  # noqa: E731
    best = -1.0
    for x in (0, 1):
        for y in (0, 1):
            first = second = 0.0
            for i, j in combinations(range(n), 2):
                first += dev(rho, pw(alpha, 1 - x) * mats[i] + (-1) ** y * pw(alpha, x) * mats[j])
                second += var(rho, pw(alpha, x) * mats[i] + (-1) ** (1 - y) * pw(alpha, 1 - x) * mats[j])
            val = (2 / (n * (n - 1)) * first**2 + second) / ((1 + alpha**2) * (n - 1))
            best = max(best, val)
    return best


def lb1_perm(rho, mats, alpha):
    return max(lb1(rho, [mats[k] for k in p], alpha) for p in permutations(range(len(mats))))


def _pair_terms(rho, mats):
    n = len(mats)
    pairs = list(combinations(range(n), 2))
    plus = [dev(rho, mats[i] + mats[j]) for i, j in pairs]
    minus = [dev(rho, mats[i] - mats[j]) for i, j in pairs]
    return n, plus, minus, var(rho, sum(mats))


def x_closed_2_1(rho, mats):
    """X at (alpha, beta) = (2, 1), coded from the reduced closed form."""
    n, plus, minus, v = _pair_terms(rho, mats)
    return (2 / (n * (n - 1)) * sum(plus) ** 2 + 2 * sum(m * m for m in minus) + v) / (3 * n - 2)


def y_closed_1_2(rho, mats):
    """Y at (alpha, beta) = (1, 2)."""
    n, plus, minus, v = _pair_terms(rho, mats)
    return (2 / (n * (n - 1)) * sum(minus) ** 2 + 2 * sum(p * p for p in plus) - v) / (3 * n - 4)


def z_closed_1_2(rho, mats):
    """Z at (alpha, beta) = (1, 2)."""
    n, plus, minus, v = _pair_terms(rho, mats)
    return (
        2 * sum(p * p for p in plus) + sum(m * m for m in minus) - sum(plus) ** 2 / (n - 1) ** 2
    ) / (3 * n - 4)


def thm2(rho, mats, alpha, beta):
    """Direct (X, Y, Z-or-None) from the general two-weight formulas."""
    n, plus, minus, v = _pair_terms(rho, mats)
    den = alpha * n + (n - 2) * beta
    sp2 = sum(p * p for p in plus)
    sm2 = sum(m * m for m in minus)
    x = (2 * beta / (n * (n - 1)) * sum(plus) ** 2 + alpha * sm2 + (alpha - beta) * v) / den
    y = (2 * alpha / (n * (n - 1)) * sum(minus) ** 2 + beta * sp2 + (alpha - beta) * v) / den
    z = None
    if beta > alpha:
        z = (beta * sp2 + alpha * sm2 + (alpha - beta) / (n - 1) ** 2 * sum(plus) ** 2) / den
    return x, y, z

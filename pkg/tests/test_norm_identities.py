import numpy as np
import pytest

from varbound.norm_identities import (
    pair_sum_identities,
    parallelogram_law,
    parameterized_parallelogram,
    weighted_parallelogram,
)


def _close(pair, rel=1e-10):
    lhs, rhs = pair
    assert abs(lhs - rhs) <= rel * max(abs(lhs), abs(rhs), 1e-300)


def _tuples(rng, count, complex_=False):
    for _ in range(count):
        n = int(rng.integers(2, 6))
        d = int(rng.integers(1, 11))
        a = rng.standard_normal((n, d))
        if complex_:
            a = a + 1j * rng.standard_normal((n, d))
        yield a


@pytest.mark.parametrize("complex_", [False, True])
def test_parallelogram_law(rng, complex_):
    for a in _tuples(rng, 300, complex_):
        _close(parallelogram_law(a))


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0, 2.0, 5.0])
@pytest.mark.parametrize("x", [0, 1])
@pytest.mark.parametrize("y", [0, 1])
def test_parameterized_parallelogram(rng, alpha, x, y):
    for a in _tuples(rng, 100, complex_=True):
        _close(parameterized_parallelogram(a, alpha, x, y))


def test_pair_sum_identities(rng):
    for a in _tuples(rng, 200):
        plus, minus = pair_sum_identities(a)
        _close(plus)
        assert abs(minus[0] - minus[1]) <= 1e-10 * max(abs(minus[0]), 1.0)


@pytest.mark.parametrize("alpha,beta", [(2, 1), (1, 2), (-1, 3)])
def test_weighted_parallelogram(rng, alpha, beta):
    for a in _tuples(rng, 200, complex_=True):
        lhs, rhs = weighted_parallelogram(a, alpha, beta)
        assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), abs(rhs), 1.0)


def test_small_hand_case():
    a = np.array([[1.0, 0.0], [0.0, 1.0]])
    assert parallelogram_law(a) == (4.0, 4.0)
    assert weighted_parallelogram(a, 2.0, 1.0) == (8.0, 8.0)


def test_rejects_single_vector():
    with pytest.raises(ValueError):
        parallelogram_law(np.ones((1, 3)))

import math

import numpy as np
import pytest

from varbound import ExampleSpec, example_set, example_state

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)

# Example 1 at theta = 0, from an exact symbolic evaluation of the trace formula
EX1_SUM = 17 / 4
EX1_SONG = 3 / 4 + (2 + math.sqrt(17) + math.sqrt(21)) ** 2 / 36
EX1_ZHANG = ((2 + math.sqrt(17) + math.sqrt(21)) ** 2 / 12 + 13 / 2) / 4


@pytest.fixture
def ex1_theta0():
    return example_state(ExampleSpec(1, 0.0)), example_set(1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)


def random_hermitian(rng, d, scale=1.0):
    h = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return scale * (h + h.conj().T) / 2


def random_density(rng, d):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    w = g @ g.conj().T
    return w / np.trace(w).real


ACCEPTANCE_LINES = []


def record_criterion(number, title, passed, detail=""):
    status = "PASS" if passed else "FAIL"
    ACCEPTANCE_LINES.append(f"[{status}] criterion {number}: {title}" + (f" ({detail})" if detail else ""))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)

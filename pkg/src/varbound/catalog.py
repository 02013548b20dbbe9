"""States and observables for the three worked examples, plus random instances.

Example 1: qubit with Bloch vector ``(sqrt(3)/2 cos t, sqrt(3)/2 sin t, 0)``
and observables ``(sx - sz, sy + sz, sz)``.

Example 2: two-qubit isotropic state with observables
``(s3 s1 + s3 s2, s3 s2, s3 s3 - s3 s2)`` (tensor products, ``s1, s2, s3``
being ``sx, sy, sz``).

Example 3: spin-1 pure state in the basis ``(|1>, |0>, |-1>)`` with
observables ``(Lx - Ly, Ly, Lz + Ly)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BlochVectorTooLong, InvalidParameter, OutOfSupportedRange, UnknownExample
from .linalg_core import (
    DensityMatrix,
    Observable,
    ObservableSet,
    kron,
    pure_state,
    validate_density,
    validate_observable,
)

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_R2 = 1 / math.sqrt(2)
_ANGULAR = {
    "x": _R2 * np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex),
    "y": _R2 * np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex),
    "z": np.diag([1, 0, -1]).astype(complex),
}

# inclusive parameter ranges per example
PARAM_RANGES = {
    1: {"theta": (0.0, 2 * math.pi)},
    2: {"theta": (0.0, 1.0)},
    3: {"theta": (0.0, math.pi), "phi": (0.0, 2 * math.pi)},
}


def pauli(axis: str) -> Observable:
    try:
        return validate_observable(_PAULI[axis], f"s{axis}")
    except KeyError:
        raise ValueError(f"unknown axis {axis!r}") from None


def angular_momentum(axis: str) -> Observable:
    """Spin-1 angular momentum component (hbar = 1)."""
    try:
        return validate_observable(_ANGULAR[axis], f"L{axis}")
    except KeyError:
        raise ValueError(f"unknown axis {axis!r}") from None


def bloch_state(r) -> DensityMatrix:
    r = np.asarray(r, dtype=float)
    if r.shape != (3,):
        raise ValueError(f"Bloch vector must have 3 components, got shape {r.shape}")
    if np.linalg.norm(r) > 1 + 1e-12:
        raise BlochVectorTooLong(f"|r| = {np.linalg.norm(r)} exceeds 1")
    m = np.eye(2, dtype=complex) + r[0] * _PAULI["x"] + r[1] * _PAULI["y"] + r[2] * _PAULI["z"]
    return validate_density(m / 2)


def isotropic_state(d: int, theta: float) -> DensityMatrix:
    """Mixture of the maximally entangled state (weight ``theta``) and its complement."""
    if d < 2:
        raise InvalidParameter(f"local dimension must be at least 2, got {d}")
    if not 0 <= theta <= 1:
        raise InvalidParameter(f"theta must lie in [0, 1], got {theta}")
    psi = np.zeros(d * d, dtype=complex)
    psi[[i * d + i for i in range(d)]] = 1 / math.sqrt(d)
    proj = np.outer(psi, psi.conj())
    m = (1 - theta) / (d * d - 1) * (np.eye(d * d) - proj) + theta * proj
    return validate_density(m)


def spin1_vector(theta: float, phi: float) -> np.ndarray:
    return np.array(
        [math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)],
        dtype=complex,
    )


def spin1_pure(theta: float, phi: float) -> DensityMatrix:
    return pure_state(spin1_vector(theta, phi))


def example_set(example_id: int) -> ObservableSet:
    if example_id == 1:
        sx, sy, sz = (_PAULI[a] for a in "xyz")
        mats = [(sx - sz, "sx-sz"), (sy + sz, "sy+sz"), (sz, "sz")]
    elif example_id == 2:
        s1, s2, s3 = (_PAULI[a] for a in "xyz")
        mats = [
            (kron(s3, s1) + kron(s3, s2), "s3s1+s3s2"),
            (kron(s3, s2), "s3s2"),
            (kron(s3, s3) - kron(s3, s2), "s3s3-s3s2"),
        ]
    elif example_id == 3:
        lx, ly, lz = (_ANGULAR[a] for a in "xyz")
        mats = [(lx - ly, "Lx-Ly"), (ly, "Ly"), (lz + ly, "Lz+Ly")]
    else:
        raise UnknownExample(f"no example with id {example_id!r}")
    return ObservableSet(tuple(validate_observable(m, label) for m, label in mats))


@dataclass(frozen=True)
class ExampleSpec:
    id: int
    theta: float
    phi: float = math.pi / 2

    def __post_init__(self):
        if self.id not in PARAM_RANGES:
            raise UnknownExample(f"no example with id {self.id!r}")
        values = {"theta": self.theta, "phi": self.phi}
        for name, (lo, hi) in PARAM_RANGES[self.id].items():
            if not lo <= values[name] <= hi:
                raise InvalidParameter(f"{name} = {values[name]} outside [{lo}, {hi}] for example {self.id}")


def example_state(spec: ExampleSpec) -> DensityMatrix:
    if spec.id == 1:
        c = math.sqrt(3) / 2
        return bloch_state([c * math.cos(spec.theta), c * math.sin(spec.theta), 0.0])
    if spec.id == 2:
        return isotropic_state(2, spec.theta)
    return spin1_pure(spec.theta, spec.phi)


def random_instance(dim: int, n_obs: int, seed: int) -> tuple[DensityMatrix, ObservableSet]:
    """Seeded random state and observables.

    ``rho = G G^dagger / Tr(G G^dagger)`` and ``A_k = (H + H^dagger) / 2`` with
    standard complex Gaussian ``G`` and ``H``. The seed is split into
    ``1 + n_obs`` independent streams in the fixed order rho, A_1, ..., A_N.
    """
    if not 2 <= dim <= 8:
        raise OutOfSupportedRange(f"dim must lie in [2, 8], got {dim}")
    if not 2 <= n_obs <= 6:
        raise OutOfSupportedRange(f"n_obs must lie in [2, 6], got {n_obs}")
    root = np.random.SeedSequence(int(seed) & 0xFFFF_FFFF_FFFF_FFFF)
    streams = [np.random.default_rng(s) for s in root.spawn(1 + n_obs)]

    def gaussian(rng):
        return (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)

    g = gaussian(streams[0])
    w = g @ g.conj().T
    rho = validate_density(w / np.trace(w).real)
    obs = []
    for k, rng in enumerate(streams[1:], start=1):
        h = gaussian(rng)
        obs.append(validate_observable((h + h.conj().T) / 2, f"A{k}"))
    return rho, ObservableSet(tuple(obs))

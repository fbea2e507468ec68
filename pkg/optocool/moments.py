"""
Second-order moments of the cavity/mechanics fluctuations and their drift system.

Moment ordering (documented 1-based, stored 0-based, component k lives at
``mu[k - 1]``)::

    1 N_a = <δa†δa>     2 N_b = <δb†δb>
    3 <δa†δb>           4 <δaδb†>
    5 <δaδb>            6 <δa†δb†>
    7 <δa²>             8 <δa†²>
    9 <δb²>          10 <δb†²>

The moments obey d/dt μ = A μ + B.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .model import PhysicalParams


N_MOMENTS = 10
PAIRING_TOL = 1e-9

# 0-based image of the pairing 3<->4, 5<->6, 7<->8, 9<->10
SWAP = np.array([0, 1, 3, 2, 5, 4, 7, 6, 9, 8])

MOMENT_NAMES = ("n_a", "n_b", "adag_b", "a_bdag", "a_b", "adag_bdag",
                "a2", "adag2", "b2", "bdag2")

_OPTICAL_MECHANICAL = slice(0, 4)
_COUNTER_ROTATING = slice(4, 10)


def _readonly(array: NDArray) -> NDArray:
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


def conjugate_swap(mu: NDArray) -> NDArray:
    """Entrywise conjugate with the index pairs exchanged."""
    return np.conj(np.asarray(mu)[SWAP])


@dataclass(frozen=True)
class MomentVector:
    mu: NDArray[np.complex128]

    def __post_init__(self):
        mu = _readonly(self.mu)
        if mu.shape != (N_MOMENTS,):
            raise ValueError(f"expected {N_MOMENTS} moments, got shape {mu.shape}")
        object.__setattr__(self, "mu", mu)

    @classmethod
    def vacuum(cls) -> "MomentVector":
        return cls(np.zeros(N_MOMENTS, dtype=complex))

    @classmethod
    def thermal(cls, n_bar: float) -> "MomentVector":
        """Optical vacuum with the mechanics in its thermal state."""
        mu = np.zeros(N_MOMENTS, dtype=complex)
        mu[1] = n_bar
        return cls(mu)

    def component(self, k: int) -> complex:
        """1-based access mirroring the moment numbering."""
        if not 1 <= k <= N_MOMENTS:
            raise IndexError(k)
        return complex(self.mu[k - 1])

    @property
    def scale(self) -> float:
        return 1.0 + float(np.max(np.abs(self.mu)))

    def pairing_error(self) -> float:
        """Largest violation of the hermitian pairing, scaled by 1 + max|μ|."""
        mismatch = np.abs(self.mu - conjugate_swap(self.mu))
        return float(np.max(mismatch)) / self.scale

    def is_paired(self, tol: float = PAIRING_TOL) -> bool:
        return self.pairing_error() <= tol

    def symmetrized(self) -> tuple["MomentVector", float]:
        """Project onto the paired subspace; also returns the correction size."""
        projected = 0.5 * (self.mu + conjugate_swap(self.mu))
        delta = float(np.max(np.abs(projected - self.mu)))
        return MomentVector(projected), delta

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.mu, dtype=dtype)


@dataclass(frozen=True)
class DriftSystem:
    A: NDArray[np.complex128]
    B: NDArray[np.complex128]
    params: PhysicalParams
    rwa: bool = False

    def __post_init__(self):
        object.__setattr__(self, "A", _readonly(self.A))
        object.__setattr__(self, "B", _readonly(self.B))
        if self.A.shape != (N_MOMENTS, N_MOMENTS) or self.B.shape != (N_MOMENTS,):
            raise ValueError("drift system must be 10x10 with a length-10 source")

    @property
    def identifier(self) -> str:
        """Stable identifier of the generating parameters and approximation."""
        p = self.params
        return (f"{'rwa' if self.rwa else 'full'}:kappa={p.kappa!r},gamma_m={p.gamma_m!r},"
                f"delta={p.delta!r},g={p.g!r},n_bar={p.n_bar!r},omega_m={p.omega_m!r}")


def build_full_system(params: PhysicalParams) -> DriftSystem:
    """Drift matrix and noise vector including the counter-rotating terms."""
    kappa, gamma, delta = params.kappa, params.gamma_m, params.delta
    omega, g = params.omega_m, params.g
    half = (kappa + gamma) / 2
    ig = 1j * g

    A = np.zeros((N_MOMENTS, N_MOMENTS), dtype=complex)
    B = np.zeros(N_MOMENTS, dtype=complex)

    def put(row, col, value):
        A[row - 1, col - 1] += value

    # N_a: -κ N_a + ig<(δa† − δa)(δb† + δb)>
    put(1, 1, -kappa)
    put(1, 3, ig); put(1, 4, -ig); put(1, 5, -ig); put(1, 6, ig)

    # N_b: -γm N_b + γm n̄ + ig<(δa† + δa)(δb† − δb)>
    put(2, 2, -gamma)
    put(2, 3, -ig); put(2, 4, ig); put(2, 5, -ig); put(2, 6, ig)
    B[1] = gamma * params.n_bar

    # <δa†δb>
    put(3, 3, -(half + 1j * delta + 1j * omega))
    put(3, 2, -ig); put(3, 1, ig); put(3, 9, -ig); put(3, 8, ig)

    # <δaδb†>
    put(4, 4, -(half - 1j * delta - 1j * omega))
    put(4, 2, ig); put(4, 1, -ig); put(4, 10, ig); put(4, 7, -ig)

    # <δaδb>: ig(1 + N_b + N_a + <δb²> + <δa²>)
    put(5, 5, -(half - 1j * delta + 1j * omega))
    put(5, 1, ig); put(5, 2, ig); put(5, 7, ig); put(5, 9, ig)
    B[4] = ig

    # <δa†δb†>
    put(6, 6, -(half + 1j * delta - 1j * omega))
    put(6, 1, -ig); put(6, 2, -ig); put(6, 8, -ig); put(6, 10, -ig)
    B[5] = -ig

    # <δa²>: 2ig<(δb† + δb)δa>
    put(7, 7, -(kappa - 2j * delta))
    put(7, 4, 2 * ig); put(7, 5, 2 * ig)

    # <δa†²>
    put(8, 8, -(kappa + 2j * delta))
    put(8, 3, -2 * ig); put(8, 6, -2 * ig)

    # <δb²>: 2ig<(δa† + δa)δb>
    put(9, 9, -(gamma + 2j * omega))
    put(9, 3, 2 * ig); put(9, 5, 2 * ig)

    # <δb†²>
    put(10, 10, -(gamma - 2j * omega))
    put(10, 4, -2 * ig); put(10, 6, -2 * ig)

    return DriftSystem(A=A, B=B, params=params, rwa=False)


def build_rwa_system(params: PhysicalParams) -> DriftSystem:
    """Full system with the beam-splitter block {1..4} cut off from {5..10}."""
    full = build_full_system(params)
    A = np.array(full.A)
    B = np.array(full.B)
    A[_OPTICAL_MECHANICAL, _COUNTER_ROTATING] = 0
    A[_COUNTER_ROTATING, _OPTICAL_MECHANICAL] = 0
    B[4] = B[5] = 0
    return DriftSystem(A=A, B=B, params=params, rwa=True)


def build_system(params: PhysicalParams, rwa: bool) -> DriftSystem:
    return build_rwa_system(params) if rwa else build_full_system(params)


def rhs(system: DriftSystem, mu: MomentVector) -> MomentVector:
    """Time derivative A·μ + B."""
    return MomentVector(system.A @ np.asarray(mu) + system.B)


# (μ1, μ2, μ3, μ4) -> (N_a, N_b, C−, C+) with C± = μ3 ± μ4
_COHERENCE_BASIS = np.array([[1, 0, 0, 0],
                             [0, 1, 0, 0],
                             [0, 0, 1, -1],
                             [0, 0, 1, 1]], dtype=complex)


def rwa_reduced_block(system: DriftSystem) -> tuple[NDArray, NDArray]:
    """The closed RWA block written in (N_a, N_b, C−, C+) coordinates."""
    if not system.rwa:
        raise ValueError("reduced block only closes for the RWA system")
    T = _COHERENCE_BASIS
    block = system.A[_OPTICAL_MECHANICAL, _OPTICAL_MECHANICAL]
    source = system.B[_OPTICAL_MECHANICAL]
    return T @ block @ np.linalg.inv(T), T @ source

"""
Steady states, stability and time evolution of d/dt μ = A μ + B.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg
from numpy.typing import NDArray
from scipy.integrate import solve_ivp

from .errors import (EigenFailure, RangeError, SingularDrift, StiffnessFailure,
                     UnstableSystem)
from .moments import DriftSystem, MomentVector

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-14
RESIDUAL_TOL = 1e-10
EIGVEC_COND_LIMIT = 1e8
RTOL = 1e-10
ATOL = 1e-12


@dataclass(frozen=True)
class StabilityReport:
    eigenvalues: NDArray[np.complex128]
    max_real_part: float
    stable: bool


@dataclass(frozen=True)
class SteadySolution:
    moments: MomentVector
    residual: float
    residual_ok: bool
    symmetrization_delta: float
    stability: StabilityReport


@dataclass(frozen=True)
class Trajectory:
    times: NDArray[np.float64]
    states: tuple[MomentVector, ...]
    params_hash: str
    method: str

    def as_array(self) -> NDArray[np.complex128]:
        return np.array([s.mu for s in self.states])


def stability(system: DriftSystem) -> StabilityReport:
    """Spectrum of the drift matrix; stable iff every real part is negative."""
    try:
        eigenvalues = scipy.linalg.eigvals(system.A)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigenFailure(f"eigenvalue iteration did not converge: {exc}") from exc
    order = np.lexsort((eigenvalues.imag, eigenvalues.real))
    eigenvalues = eigenvalues[order]
    max_real = float(np.max(eigenvalues.real))
    return StabilityReport(eigenvalues=eigenvalues, max_real_part=max_real,
                           stable=max_real < 0)


def slowest_rate(system: DriftSystem) -> float:
    """|max real part| of the spectrum, the slowest relaxation rate."""
    return abs(stability(system).max_real_part)


def _residual(system: DriftSystem, mu: NDArray) -> float:
    return float(np.max(np.abs(system.A @ mu + system.B)))


def solve_steady(system: DriftSystem, allow_unstable: bool = False,
                 report: StabilityReport | None = None) -> SteadySolution:
    """Solve A μ = −B with an LU factorization, plus diagnostics.

    ``report`` may carry an already computed spectrum of ``system``.
    """
    A = system.A
    norm = float(np.max(np.sum(np.abs(A), axis=1)))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A)
    min_pivot = float(np.min(np.abs(np.diag(lu))))
    threshold = PIVOT_TOL * norm
    logger.debug("LU smallest pivot %.3e (threshold %.3e)", min_pivot, threshold)
    if min_pivot < threshold:
        raise SingularDrift(min_pivot, threshold)

    if report is None:
        report = stability(system)
    if not report.stable:
        if not allow_unstable:
            raise UnstableSystem(report)
        logger.warning("steady state of an unstable system (max real part %.3e)",
                       report.max_real_part)

    mu = scipy.linalg.lu_solve((lu, piv), -system.B)
    bound = RESIDUAL_TOL * (1.0 + float(np.max(np.abs(system.B))))
    for _ in range(2):
        if _residual(system, mu) <= bound:
            break
        mu = mu - scipy.linalg.lu_solve((lu, piv), system.A @ mu + system.B)

    moments, delta = MomentVector(mu).symmetrized()
    logger.debug("steady state symmetrization correction %.3e", delta)
    residual = _residual(system, moments.mu)
    residual_ok = residual <= bound
    if not residual_ok:
        logger.debug("steady-state residual %.3e exceeds %.3e", residual, bound)
    return SteadySolution(moments=moments, residual=residual, residual_ok=residual_ok,
                          symmetrization_delta=delta, stability=report)


def steady_state(system: DriftSystem, allow_unstable: bool = False) -> MomentVector:
    """Stationary moments of ``system``."""
    return solve_steady(system, allow_unstable).moments


def _check_grid(t_grid: Sequence[float]) -> NDArray[np.float64]:
    times = np.asarray(t_grid, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise RangeError("t_grid", "must be a non-empty 1-D grid")
    if np.any(np.diff(times) <= 0):
        raise RangeError("t_grid", "must be strictly ascending")
    return times


def _propagate_eigen(system: DriftSystem, mu0: NDArray, times: NDArray,
                     strict: bool) -> NDArray | None:
    w, V = scipy.linalg.eig(system.A)
    cond = np.linalg.cond(V)
    if not np.isfinite(cond) or cond > EIGVEC_COND_LIMIT:
        if strict:
            raise EigenFailure(f"eigenvector basis condition number {cond:.3e} "
                               f"exceeds {EIGVEC_COND_LIMIT:.0e}")
        logger.warning("eigenvector condition number %.3e, falling back to "
                       "adaptive integration", cond)
        return None

    lu = scipy.linalg.lu_factor(V)
    c0 = scipy.linalg.lu_solve(lu, mu0)
    b = scipy.linalg.lu_solve(lu, system.B)
    dt = times - times[0]
    growth = np.exp(np.outer(dt, w))
    # ∫0^t e^{λs} ds, with the λ = 0 limit
    with np.errstate(divide="ignore", invalid="ignore"):
        forced = np.where(w == 0, dt[:, None], np.expm1(np.outer(dt, w)) / w)
    modes = growth * c0 + forced * b
    states = modes @ V.T
    states[dt == 0] = mu0
    return states


def _propagate_rk(system: DriftSystem, mu0: NDArray, times: NDArray) -> NDArray:
    if times.size == 1:
        return mu0[None, :]
    A, B = system.A, system.B
    sol = solve_ivp(lambda t, y: A @ y + B, (times[0], times[-1]), mu0.astype(complex),
                    method="DOP853", t_eval=times, rtol=RTOL, atol=ATOL)
    if not sol.success:
        raise StiffnessFailure(f"adaptive integration failed: {sol.message}")
    logger.debug("DOP853 used %d right-hand-side evaluations", sol.nfev)
    states = sol.y.T.copy()
    states[0] = mu0
    return states


def evolve(system: DriftSystem, mu0: MomentVector, t_grid: Sequence[float],
           method: str = "auto") -> Trajectory:
    """Integrate the moment flow from ``mu0`` over ``t_grid``.

    ``method`` is ``"eigen"`` (exact propagation in the eigenbasis of A),
    ``"integrate"`` (adaptive Dormand-Prince 8(5,3)) or ``"auto"``: eigen unless the
    eigenvector basis is too ill-conditioned.
    """
    times = _check_grid(t_grid)
    start = np.asarray(mu0, dtype=complex)
    states = None
    used = method
    if method in ("auto", "eigen"):
        states = _propagate_eigen(system, start, times, strict=method == "eigen")
        used = "eigen"
    elif method != "integrate":
        raise ValueError(f"unknown evolution method {method!r}")
    if states is None:
        states = _propagate_rk(system, start, times)
        used = "integrate"
    canonical = [MomentVector(row).symmetrized() for row in states]
    logger.debug("trajectory symmetrization correction %.3e",
                 max(delta for _, delta in canonical))
    return Trajectory(times=times, states=tuple(state for state, _ in canonical),
                      params_hash=system.identifier, method=used)

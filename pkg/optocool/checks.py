"""
Oracle-equivalence suite run by ``optocool check``.

Each check compares the numerical engine with an analytic result or an
independent method and reports pass/fail with the measured discrepancy.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .model import PhysicalParams, instability_margin
from .moments import MomentVector, build_system
from .observables import (min_phonon_asymptotic, phonon_number, photon_number,
                          rwa_phonon_closed_form, rwa_resonant_phonon,
                          variance_asymptotic, variances)
from .solve import evolve, slowest_rate, solve_steady, stability
from .sweep import FIG05_BASE, FIG3_BASE, FIG6_G_RANGE, FIG_KAPPA_RANGE, locate_stability_boundary

logger = logging.getLogger(__name__)

SEED = 20240601
RANDOM_SAMPLES = 200


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'✅' if self.passed else '❌'} {self.name}: {self.detail}"


def random_rwa_params(rng: np.random.Generator, samples: int = RANDOM_SAMPLES,
                      delta: float | None = None) -> list[PhysicalParams]:
    """Parameter sets spread over the resolved and unresolved sideband regimes."""
    def log_uniform(lo, hi):
        return float(10 ** rng.uniform(math.log10(lo), math.log10(hi)))

    out = []
    for _ in range(samples):
        out.append(PhysicalParams(
            kappa=log_uniform(1e-3, 1.0),
            g=log_uniform(1e-3, 1.0),
            gamma_m=log_uniform(1e-7, 1e-3),
            n_bar=log_uniform(1.0, 1e4),
            delta=float(rng.uniform(-2.0, -0.1)) if delta is None else delta,
        ))
    return out


def relative_error(value: float, reference: float) -> float:
    return abs(value - reference) / abs(reference)


def check_rwa_oracle(samples: int = RANDOM_SAMPLES, seed: int = SEED) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for params in random_rwa_params(rng, samples):
        numeric = phonon_number(solve_steady(build_system(params, rwa=True)).moments)
        worst = max(worst, relative_error(numeric, rwa_phonon_closed_form(params)))
    return CheckResult("RWA steady state vs closed form", worst <= 1e-9,
                       f"max relative error {worst:.2e} over {samples} points (<= 1e-9)")


def check_resonant_reduction(samples: int = RANDOM_SAMPLES, seed: int = SEED) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = max(relative_error(rwa_phonon_closed_form(p), rwa_resonant_phonon(p))
                for p in random_rwa_params(rng, samples, delta=-1.0))
    return CheckResult("RWA closed form at the red sideband", worst <= 1e-12,
                       f"max relative error {worst:.2e} (<= 1e-12)")


def _full_vs_asymptotic(params: PhysicalParams) -> float:
    numeric = phonon_number(solve_steady(build_system(params, rwa=False)).moments)
    estimate = min_phonon_asymptotic(params.kappa, params.g, params.omega_m,
                                     params.gamma_m * params.n_bar)
    return relative_error(numeric, estimate)


def check_asymptotic_minimum() -> CheckResult:
    base = FIG05_BASE
    coarse = _full_vs_asymptotic(base)
    fine = _full_vs_asymptotic(base.replace(gamma_m=1e-7, n_bar=base.gamma_m * base.n_bar / 1e-7))
    return CheckResult("minimum phonon number vs asymptotic formula",
                       coarse <= 0.05 and fine <= 0.02,
                       f"relative error {coarse:.2%} at γm=1e-5 (<= 5%), "
                       f"{fine:.2%} at γm=1e-7 (<= 2%)")


def check_variance_oracle() -> CheckResult:
    params = FIG05_BASE
    vs = variances(solve_steady(build_system(params, rwa=False)).moments)
    y_plus, x_minus = variance_asymptotic(params.kappa, params.g, params.omega_m,
                                          params.gamma_m * params.n_bar)
    err_y = relative_error(vs.var_Y_plus, y_plus)
    err_x = relative_error(vs.var_X_minus, x_minus)
    squeezed = vs.var_Y_plus < 0.5 and vs.var_X_minus < 0.5
    return CheckResult("quadrature variances vs asymptotic formula",
                       squeezed and err_y <= 0.05 and err_x <= 0.05,
                       f"var_Y+ = {vs.var_Y_plus:.4f} ({err_y:.2%}), "
                       f"var_X- = {vs.var_X_minus:.4f} ({err_x:.2%})")


def check_uncertainty_floor(resolution: int = 21) -> CheckResult:
    checked = 0
    worst = math.inf
    for g in np.linspace(*FIG6_G_RANGE, resolution):
        for kappa in np.linspace(*FIG_KAPPA_RANGE, resolution):
            params = FIG05_BASE.replace(g=g, kappa=kappa)
            system = build_system(params, rwa=False)
            report = stability(system)
            if not report.stable:
                continue
            vs = variances(solve_steady(system, report=report).moments)
            if min(vs.var_X_plus, vs.var_Y_plus, vs.var_X_minus, vs.var_Y_minus) < 0:
                worst = -math.inf
            worst = min(worst, *vs.uncertainty_products)
            checked += 1
    return CheckResult("uncertainty products >= 1/4", checked > 0 and worst >= 0.25 - 1e-9,
                       f"smallest product {worst:.12f} over {checked} stable points")


def check_decoupled(n_bar: float = 1e3) -> CheckResult:
    params = FIG05_BASE.replace(g=0.0, n_bar=n_bar)
    mu = solve_steady(build_system(params, rwa=False)).moments
    vs = variances(mu)
    expected = (1 + n_bar) / 2
    var_err = max(relative_error(v, expected) for v in
                  (vs.var_X_plus, vs.var_Y_plus, vs.var_X_minus, vs.var_Y_minus))
    n_b_err = relative_error(phonon_number(mu), n_bar)
    n_a = photon_number(mu)
    return CheckResult("decoupled limit g = 0", var_err <= 1e-12 and n_b_err <= 1e-12 and
                       abs(n_a) <= 1e-12,
                       f"N_b error {n_b_err:.1e}, N_a = {n_a:.1e}, variance error {var_err:.1e}")


def check_dynamics(points: int = 50) -> CheckResult:
    params = FIG3_BASE.replace(g=0.2)
    system = build_system(params, rwa=False)
    horizon = 20 / slowest_rate(system)
    grid = np.linspace(0, horizon, points)
    start = MomentVector.thermal(params.n_bar)
    eigen = evolve(system, start, grid, method="eigen").as_array()
    integrated = evolve(system, start, grid, method="integrate").as_array()
    scale = 1 + np.max(np.abs(eigen))
    gap = float(np.max(np.abs(eigen - integrated))) / scale
    steady = np.asarray(solve_steady(system).moments)
    end_gap = float(np.max(np.abs(eigen[-1] - steady))) / scale
    return CheckResult("eigen propagation vs adaptive integration",
                       gap <= 1e-8 and end_gap <= 1e-6,
                       f"trajectory gap {gap:.1e} (<= 1e-8), endpoint vs steady "
                       f"{end_gap:.1e} (<= 1e-6), t_max = {horizon:.4g}")


def check_stability_boundary() -> CheckResult:
    base = FIG05_BASE
    boundary = locate_stability_boundary(base, "g", 0.0, 1.0)
    margin = instability_margin(base.replace(g=boundary.value))
    return CheckResult("stability boundary in g at κ = 0.5, Δ = −ωm", True,
                       f"stability lost at g = {boundary.value:.6f}, D = 0 at "
                       f"g = {boundary.reference:.6f}, offset {boundary.offset:+.6f} "
                       f"(D there {margin:+.4f})")


def check_hermiticity(steps: int = 100, seed: int = SEED) -> CheckResult:
    rng = np.random.default_rng(seed)
    system = build_system(FIG3_BASE, rwa=False)
    mu = np.zeros(10, dtype=complex)
    mu[:2] = rng.uniform(0, 10, 2)
    for k in (2, 4, 6, 8):
        mu[k] = complex(*rng.normal(size=2))
        mu[k + 1] = np.conj(mu[k])
    trajectory = evolve(system, MomentVector(mu), np.linspace(0, 10, steps + 1))
    worst = max(state.pairing_error() for state in trajectory.states)
    return CheckResult("conjugate pairing along trajectories", worst <= 1e-8,
                       f"max pairing error {worst:.1e} over {steps} steps (<= 1e-8)")


CHECKS: tuple[Callable[[], CheckResult], ...] = (
    check_rwa_oracle,
    check_resonant_reduction,
    check_asymptotic_minimum,
    check_variance_oracle,
    check_uncertainty_floor,
    check_decoupled,
    check_dynamics,
    check_stability_boundary,
    check_hermiticity,
)


def run_checks() -> list[CheckResult]:
    results = []
    for check in CHECKS:
        try:
            results.append(check())
        except DomainError as exc:
            name = check.__name__.removeprefix("check_").replace("_", " ")
            results.append(CheckResult(name, False, f"{exc.code}: {exc}"))
    return results

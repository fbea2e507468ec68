"""
Physical read-outs of moment vectors and the analytic cooling/squeezing formulas.

Quadratures of the hybrid modes d± = (δa ± δb)/√2 are
X = (d + d†)/√2 and Y = (d − d†)/(√2 i); the vacuum variance is 1/2.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (DegenerateDenominator, NegativeOccupation, NonHermitianInput,
                     OutsideValidity)
from .model import PhysicalParams, instability_margin
from .moments import PAIRING_TOL, MomentVector, build_system
from .solve import StabilityReport, solve_steady

logger = logging.getLogger(__name__)

VACUUM = 0.5
DEFAULT_SQUEEZING_TOL = 1e-6


class FieldKind(str, enum.Enum):
    SQUEEZED = "squeezed"
    COHERENT_OR_VACUUM = "coherent_or_vacuum"
    CHAOTIC = "chaotic"
    MIXED = "mixed"


@dataclass(frozen=True)
class VarianceSet:
    var_X_plus: float
    var_Y_plus: float
    var_X_minus: float
    var_Y_minus: float

    @property
    def uncertainty_products(self) -> tuple[float, float]:
        """⟨ΔX²⟩⟨ΔY²⟩ for d+ and d−; bounded below by 1/4."""
        return (self.var_X_plus * self.var_Y_plus,
                self.var_X_minus * self.var_Y_minus)

    def pair(self, field_id: str) -> tuple[float, float]:
        if field_id == "d+":
            return self.var_X_plus, self.var_Y_plus
        if field_id == "d-":
            return self.var_X_minus, self.var_Y_minus
        raise ValueError(f"field_id must be 'd+' or 'd-', got {field_id!r}")


@dataclass(frozen=True)
class SqueezingVerdict:
    field_id: str
    classification: FieldKind
    squeezed_quadrature: Optional[str]
    margin: float


@dataclass(frozen=True)
class MinPhononEstimate:
    dissipation: float
    backaction: float
    beta: float

    @property
    def total(self) -> float:
        return self.dissipation + self.backaction


def phonon_number(mu: MomentVector, strict: bool = True) -> float:
    """Mean phonon number N_b = Re μ2.

    ``strict=False`` passes the negative values of unstable systems through.
    """
    n_b = float(np.real(mu.component(2)))
    if strict and n_b < -PAIRING_TOL:
        raise NegativeOccupation(f"phonon number {n_b:.3e} is negative")
    return n_b


def photon_number(mu: MomentVector, strict: bool = True) -> float:
    """Mean intracavity photon number of the fluctuations, Re μ1."""
    n_a = float(np.real(mu.component(1)))
    if strict and n_a < -PAIRING_TOL:
        raise NegativeOccupation(f"photon number {n_a:.3e} is negative")
    return n_a


def rwa_phonon_closed_form(params: PhysicalParams) -> float:
    """Stationary phonon number of the RWA system at any detuning."""
    k, gm, g2 = params.kappa, params.gamma_m, params.g ** 2
    d2 = (params.delta + params.omega_m) ** 2
    num = k * k * (k + 2 * gm) + k * (gm * gm + 4 * g2 + 4 * d2) + 4 * g2 * gm
    den = (gm * k ** 3 + (4 * g2 + 2 * gm * gm) * k * k
           + (gm * gm + 8 * g2 + 4 * d2) * gm * k + 4 * g2 * gm * gm)
    if den < 1e-30:
        raise DegenerateDenominator(f"RWA closed-form denominator {den:.3e}")
    return params.n_bar * gm * num / den


def rwa_resonant_phonon(params: PhysicalParams) -> float:
    """RWA phonon number on the red sideband, Δ = −ωm."""
    k, gm = params.kappa, params.gamma_m
    inner = 4 * params.g ** 2 + gm * k
    if inner == 0:
        raise DegenerateDenominator("4g² + γm·κ vanishes")
    return params.n_bar * gm / (gm + k) * (1 + k * k / inner)


def _asymptotic_domain(kappa: float, g: float, omega_m: float) -> float:
    if kappa <= 0 or g <= 0:
        raise OutsideValidity("asymptotic formulas need κ > 0 and g > 0")
    D = kappa ** 2 + 4 * omega_m ** 2 - 16 * g ** 2
    if D <= 0:
        raise OutsideValidity(f"D = κ² + 4ωm² − 16g² = {D:.6g} is not positive")
    return D


def min_phonon_breakdown(kappa: float, g: float, omega_m: float,
                         n_gamma: float) -> MinPhononEstimate:
    """Minimum phonon number at Δ = −ωm for γm → 0 with γm·n̄ = ``n_gamma`` fixed.

    Split into the mechanical-dissipation term and the quantum-backaction term.
    """
    D = _asymptotic_domain(kappa, g, omega_m)
    k2, g2, w2 = kappa ** 2, g ** 2, omega_m ** 2
    beta = 8 * g2 * (k2 + 4 * w2) / D
    dissipation = (n_gamma / (64 * kappa * g2 * w2)
                   * (kappa ** 4 + 16 * w2 * (k2 + 4 * g2) + 8 * g2 * beta))
    backaction = (k2 + beta) / (16 * w2)
    return MinPhononEstimate(dissipation=dissipation, backaction=backaction, beta=beta)


def min_phonon_asymptotic(kappa: float, g: float, omega_m: float, n_gamma: float) -> float:
    return min_phonon_breakdown(kappa, g, omega_m, n_gamma).total


def variances(mu: MomentVector) -> VarianceSet:
    """Quadrature variances of d± from the ten second moments."""
    scale = mu.scale
    if mu.pairing_error() > PAIRING_TOL:
        raise NonHermitianInput(
            f"moment pairing violated by {mu.pairing_error():.3e} (relative)")
    m = mu.mu
    quad = 0.5 * m[6:10].sum()
    raw = {
        "var_X_plus": 0.5 * (1 + m[0:6].sum() + quad),
        "var_X_minus": 0.5 * (1 + m[0:2].sum() - m[2:6].sum() + quad),
        "var_Y_plus": 0.5 * (1 + m[0:4].sum() - m[4:6].sum() - quad),
        "var_Y_minus": 0.5 * (1 + m[0:2].sum() + m[4:6].sum() - m[2:4].sum() - quad),
    }
    for name, value in raw.items():
        if abs(value.imag) > PAIRING_TOL * scale:
            raise NonHermitianInput(f"{name} has imaginary part {value.imag:.3e}")
    return VarianceSet(**{name: float(value.real) for name, value in raw.items()})


def variance_asymptotic(kappa: float, g: float, omega_m: float,
                        n_gamma: float) -> tuple[float, float]:
    """(⟨ΔY_{d+}²⟩, ⟨ΔX_{d−}²⟩) at Δ = −ωm for γm ≪ κ, g, ωm."""
    D = _asymptotic_domain(kappa, g, omega_m)
    w = omega_m
    shift = g / (2 * w) - kappa ** 2 / (32 * w * w) * (1 + 16 * g * g / D)
    h1 = ((1 - g / w) / kappa
          + kappa / (8 * g) * (1 / g - 1 / w)
          + kappa / (16 * w * w) * (1 + kappa ** 2 / (8 * g * g) + 16 * g * g / D))
    h2 = h1 + 8 * g * g * (w - 2 * g) / (kappa * w * D)
    var_y_plus = VACUUM - shift + n_gamma * h1
    var_x_minus = VACUUM - (shift - 4 * g * g / D * (w - 2 * g)) + n_gamma * h2
    return var_y_plus, var_x_minus


def classify_field(vs: VarianceSet, field_id: str,
                   tol: float = DEFAULT_SQUEEZING_TOL) -> SqueezingVerdict:
    """Chaotic, vacuum/coherent, squeezed or mixed, compared with the vacuum level."""
    var_x, var_y = vs.pair(field_id)
    smallest = min(var_x, var_y)
    quadrature = None
    if smallest < VACUUM - tol:
        kind = FieldKind.SQUEEZED
        quadrature = "X" if var_x <= var_y else "Y"
    elif abs(var_x - VACUUM) <= tol and abs(var_y - VACUUM) <= tol:
        kind = FieldKind.COHERENT_OR_VACUUM
    elif var_x > VACUUM + tol and var_y > VACUUM + tol:
        kind = FieldKind.CHAOTIC
    else:
        kind = FieldKind.MIXED
    return SqueezingVerdict(field_id=field_id, classification=kind,
                            squeezed_quadrature=quadrature, margin=VACUUM - smallest)


@dataclass(frozen=True)
class CoolingComparison:
    n_b_rwa: float
    n_b_full: float

    @property
    def difference(self) -> float:
        """full − RWA; negative when the counter-rotating terms cool further."""
        return self.n_b_full - self.n_b_rwa

    @property
    def full_is_lower(self) -> bool:
        return self.n_b_full < self.n_b_rwa


def cooling_comparison(params: PhysicalParams, allow_unstable: bool = False) -> CoolingComparison:
    values = []
    for rwa_model in (True, False):
        solution = solve_steady(build_system(params, rwa=rwa_model), allow_unstable)
        values.append(phonon_number(solution.moments, strict=solution.stability.stable))
    rwa, full = values
    return CoolingComparison(n_b_rwa=rwa, n_b_full=full)


@dataclass(frozen=True)
class SteadyReport:
    params: PhysicalParams
    model: str
    n_a: float
    n_b: float
    variances: VarianceSet
    verdicts: tuple[SqueezingVerdict, SqueezingVerdict]
    stability: StabilityReport
    residual: float
    symmetrization_delta: float
    closed_forms: dict = field(default_factory=dict)

    def as_row(self) -> dict:
        """Flat scalar view used by the table writers."""
        row = {
            "model": self.model,
            "kappa": self.params.kappa,
            "gamma_m": self.params.gamma_m,
            "delta": self.params.delta,
            "g": self.params.g,
            "n_bar": self.params.n_bar,
            "quality_factor": self.params.quality_factor,
            "n_a": self.n_a,
            "n_b": self.n_b,
            "var_X_plus": self.variances.var_X_plus,
            "var_Y_plus": self.variances.var_Y_plus,
            "var_X_minus": self.variances.var_X_minus,
            "var_Y_minus": self.variances.var_Y_minus,
            "uncertainty_plus": self.variances.uncertainty_products[0],
            "uncertainty_minus": self.variances.uncertainty_products[1],
            "stable": self.stability.stable,
            "max_real_part": self.stability.max_real_part,
            "residual": self.residual,
            "symmetrization_delta": self.symmetrization_delta,
        }
        for verdict in self.verdicts:
            suffix = "plus" if verdict.field_id == "d+" else "minus"
            row[f"field_{suffix}"] = verdict.classification.value
            row[f"squeezing_margin_{suffix}"] = verdict.margin
        row.update(self.closed_forms)
        return row


def _closed_forms(params: PhysicalParams, model: str) -> dict:
    forms: dict = {}
    on_resonance = math.isclose(params.delta, -params.omega_m, rel_tol=0, abs_tol=1e-12)
    if model == "rwa":
        try:
            forms["rwa_closed_form"] = rwa_phonon_closed_form(params)
            if on_resonance:
                forms["rwa_resonant"] = rwa_resonant_phonon(params)
        except DegenerateDenominator as exc:
            logger.info("RWA closed form unavailable: %s", exc)
    elif on_resonance and params.g > 0 and instability_margin(params) > 0:
        n_gamma = params.gamma_m * params.n_bar
        estimate = min_phonon_breakdown(params.kappa, params.g, params.omega_m, n_gamma)
        forms["asymptotic_min_dissipation"] = estimate.dissipation
        forms["asymptotic_min_backaction"] = estimate.backaction
        forms["asymptotic_min"] = estimate.total
        var_y_plus, var_x_minus = variance_asymptotic(
            params.kappa, params.g, params.omega_m, n_gamma)
        forms["asymptotic_var_Y_plus"] = var_y_plus
        forms["asymptotic_var_X_minus"] = var_x_minus
    return forms


def steady_report(params: PhysicalParams, model: str = "full",
                  allow_unstable: bool = False,
                  tol: float = DEFAULT_SQUEEZING_TOL) -> SteadyReport:
    """Everything the ``steady`` command prints for one parameter point."""
    if model not in ("rwa", "full"):
        raise ValueError(f"model must be 'rwa' or 'full', got {model!r}")
    solution = solve_steady(build_system(params, rwa=model == "rwa"), allow_unstable)
    mu = solution.moments
    if not solution.residual_ok:
        logger.warning("steady-state residual %.3e is above the solver bound", solution.residual)
    vs = variances(mu)
    return SteadyReport(
        params=params,
        model=model,
        n_a=photon_number(mu, strict=solution.stability.stable),
        n_b=phonon_number(mu, strict=solution.stability.stable),
        variances=vs,
        verdicts=(classify_field(vs, "d+", tol), classify_field(vs, "d-", tol)),
        stability=solution.stability,
        residual=solution.residual,
        symmetrization_delta=solution.symmetrization_delta,
        closed_forms=_closed_forms(params, model),
    )

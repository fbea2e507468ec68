"""
Physical parameters and the classical working point of the driven cavity.

All rates and detunings are stored in units of the mechanical frequency
(``omega_m`` is 1 unless a caller deliberately keeps dimensions around).
"""
from __future__ import annotations

import dataclasses
import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import constants

from .errors import (BistableWorkingPoint, NoPhysicalRoot, PhysicsWarning,
                     RangeError)

logger = logging.getLogger(__name__)

MIN_QUALITY_FACTOR = 100.0


def _require(ok: bool, path: str, reason: str) -> None:
    if not ok:
        raise RangeError(path, reason)


def _finite(value: float, name: str) -> float:
    value = float(value)
    _require(math.isfinite(value), name, f"must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class PhysicalParams:
    """Effective parameters of the linearized optomechanical model."""
    kappa: float
    gamma_m: float
    delta: float
    g: float
    n_bar: float
    omega_m: float = 1.0

    def __post_init__(self):
        for f in dataclasses.fields(self):
            object.__setattr__(self, f.name, _finite(getattr(self, f.name), f.name))
        _require(self.omega_m > 0, "omega_m", "must be > 0")
        _require(self.kappa > 0, "kappa", "must be > 0")
        _require(self.gamma_m >= 0, "gamma_m", "must be >= 0")
        _require(self.g >= 0, "g", "must be >= 0")
        _require(self.n_bar >= 0, "n_bar", "must be >= 0")
        if self.quality_factor < MIN_QUALITY_FACTOR:
            logger.warning("mechanical quality factor %.3g is below %g",
                           self.quality_factor, MIN_QUALITY_FACTOR)
            warnings.warn(
                f"Q_m = {self.quality_factor:.3g} < {MIN_QUALITY_FACTOR:g}: "
                "the Markovian mechanical bath needs a large quality factor",
                PhysicsWarning, stacklevel=3)

    @property
    def quality_factor(self) -> float:
        if self.gamma_m == 0:
            return math.inf
        return self.omega_m / self.gamma_m

    def replace(self, **changes) -> "PhysicalParams":
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_si(cls, omega_m_si: float, *, kappa: float, gamma_m: float,
                delta: float, g: float, n_bar: float) -> "PhysicalParams":
        """Build normalized parameters from rates given in rad/s."""
        _require(omega_m_si > 0, "omega_m_si", "must be > 0")
        return cls(kappa=kappa / omega_m_si, gamma_m=gamma_m / omega_m_si,
                   delta=delta / omega_m_si, g=g / omega_m_si, n_bar=n_bar)


@dataclass(frozen=True)
class DriveConfig:
    """Drive-level description, before linearization around the working point."""
    drive_strength_E: complex
    delta_0: float
    g0: float
    kappa: float
    gamma_m: float
    n_bar: float
    omega_m: float = 1.0

    def __post_init__(self):
        E = complex(self.drive_strength_E)
        _require(math.isfinite(E.real) and math.isfinite(E.imag),
                 "drive_strength_E", "must be finite")
        object.__setattr__(self, "drive_strength_E", E)
        for name in ("delta_0", "g0", "kappa", "gamma_m", "n_bar", "omega_m"):
            object.__setattr__(self, name, _finite(getattr(self, name), name))
        _require(self.g0 >= 0, "g0", "must be >= 0")
        _require(self.omega_m > 0, "omega_m", "must be > 0")
        _require(self.kappa > 0, "kappa", "must be > 0")
        _require(self.gamma_m >= 0, "gamma_m", "must be >= 0")
        _require(self.n_bar >= 0, "n_bar", "must be >= 0")

    @property
    def drive_power(self) -> float:
        """|E|²"""
        return abs(self.drive_strength_E) ** 2


@dataclass(frozen=True)
class WorkingPoint:
    a_s: complex
    b_s: float
    delta_eff: float
    photon_occupancy: float
    g_enhanced: float


def thermal_occupation(omega: float, temperature: float) -> float:
    """Bose-Einstein occupation 1/(exp(ħω/k_BT) - 1) of a mode at ``omega`` rad/s."""
    _require(omega > 0, "omega", "must be > 0")
    _require(temperature >= 0, "temperature", "must be >= 0")
    if temperature == 0:
        return 0.0
    x = constants.hbar * omega / (constants.k * temperature)
    with np.errstate(over="ignore"):
        return float(1.0 / np.expm1(x))


def instability_margin(params: PhysicalParams) -> float:
    """D = κ² + 4ωm² − 16g²; the asymptotic formulas need D > 0."""
    return params.kappa ** 2 + 4 * params.omega_m ** 2 - 16 * params.g ** 2


def _cubic_residual(cfg: DriveConfig, n: float) -> float:
    shift = cfg.g0 ** 2 / cfg.omega_m
    return n * (cfg.kappa ** 2 / 4 + (cfg.delta_0 - shift * n) ** 2) - cfg.drive_power


def _polish(cfg: DriveConfig, n: float, steps: int = 3) -> float:
    shift = cfg.g0 ** 2 / cfg.omega_m
    for _ in range(steps):
        x = cfg.delta_0 - shift * n
        slope = cfg.kappa ** 2 / 4 + x * x - 2 * shift * n * x
        if slope == 0:
            break
        n = max(n - _cubic_residual(cfg, n) / slope, 0.0)
    return n


def cubic_roots(cfg: DriveConfig) -> list[float]:
    """Distinct real roots n_c of n(κ²/4 + (Δ0 − g0²n/ωm)²) = |E|², ascending.

    The cubic is solved in u = g0²·n/ωm (a monic polynomial) through its
    companion matrix, the root count is decided by the discriminant sign.
    """
    power = cfg.drive_power
    if power == 0:
        return [0.0]
    if cfg.g0 == 0:
        return [power / (cfg.kappa ** 2 / 4 + cfg.delta_0 ** 2)]

    shift = cfg.g0 ** 2 / cfg.omega_m
    b = -2 * cfg.delta_0
    c = cfg.kappa ** 2 / 4 + cfg.delta_0 ** 2
    d = -shift * power
    disc = 18 * b * c * d - 4 * b ** 3 * d + b * b * c * c - 4 * c ** 3 - 27 * d * d
    scale = max(abs(b), math.sqrt(abs(c)), abs(d) ** (1 / 3)) ** 6
    roots = np.roots([1.0, b, c, d])
    logger.debug("working-point cubic roots %s, discriminant %.3e", roots, disc)

    if disc < -1e-12 * scale:
        candidates = [roots[np.argmin(np.abs(roots.imag))].real]
    else:
        candidates = sorted(roots.real)

    distinct: list[float] = []
    for u in candidates:
        n = _polish(cfg, u / shift)
        if not distinct or abs(n - distinct[-1]) > 1e-9 * max(1.0, abs(n)):
            distinct.append(n)
    return distinct


def classical_working_point(cfg: DriveConfig) -> WorkingPoint:
    """Self-consistent mean fields a_s, b_s and the shifted detuning."""
    roots = cubic_roots(cfg)
    if len(roots) > 1:
        raise BistableWorkingPoint(roots)
    n_c = roots[0]
    if not math.isfinite(n_c) or n_c < 0:
        raise NoPhysicalRoot(f"cubic root n_c = {n_c!r} is not a photon number")

    residual = _cubic_residual(cfg, n_c)
    if abs(residual) > 1e-12 * max(1.0, cfg.drive_power):
        logger.warning("working-point residual %.3e after polishing", residual)

    shift = cfg.g0 ** 2 * n_c / cfg.omega_m
    delta_eff = cfg.delta_0 - shift
    a_s = cfg.drive_strength_E / complex(cfg.kappa / 2, delta_eff)
    return WorkingPoint(
        a_s=a_s,
        b_s=cfg.g0 * n_c / cfg.omega_m,
        delta_eff=delta_eff,
        photon_occupancy=n_c,
        g_enhanced=cfg.g0 * math.sqrt(n_c),
    )


def check_working_point(wp: WorkingPoint, cfg: DriveConfig) -> float:
    """Re-evaluate the working-point relations; returns the cubic residual."""
    n_c = wp.photon_occupancy
    if not math.isclose(wp.b_s, cfg.g0 * n_c / cfg.omega_m, rel_tol=1e-12, abs_tol=1e-300):
        raise NoPhysicalRoot("b_s does not match g0·n_c/ωm")
    if not math.isclose(wp.delta_eff, cfg.delta_0 - cfg.g0 ** 2 * n_c / cfg.omega_m,
                        rel_tol=1e-12, abs_tol=1e-15):
        raise NoPhysicalRoot("delta_eff does not match Δ0 − g0²n_c/ωm")
    return _cubic_residual(cfg, n_c)


def to_effective(cfg: DriveConfig) -> PhysicalParams:
    """Linearize ``cfg`` around its unique working point."""
    wp = classical_working_point(cfg)
    return PhysicalParams(kappa=cfg.kappa, gamma_m=cfg.gamma_m, delta=wp.delta_eff,
                          g=wp.g_enhanced, n_bar=cfg.n_bar, omega_m=cfg.omega_m)

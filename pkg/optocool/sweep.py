"""
Parameter grids, detuning optimization and the figure datasets.

Grid points are independent and run on the sweep thread pool; rows are
always emitted in row-major grid order (first axis outermost).
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
import pandas as pd
from scipy.optimize import brentq

from .errors import DomainError, InvalidSweepSpec, NoStablePoint, OptocoolError
from .model import PhysicalParams, instability_margin
from .moments import PAIRING_TOL, build_system
from .observables import (min_phonon_asymptotic, phonon_number, photon_number,
                          rwa_phonon_closed_form, variance_asymptotic, variances)
from .parallel import ordered_map
from .solve import solve_steady, stability
from .tables import SweepTable

logger = logging.getLogger(__name__)

PARAMETERS = ("delta", "g", "kappa", "gamma_m", "n_bar")
SCALES = ("linear", "log")
MODELS = ("rwa", "full", "both")
OUTPUTS = ("phonon", "variances", "stability", "closed_forms")

COARSE_POINTS = 64
DETUNING_TOL = 1e-6
PHI = (1 + math.sqrt(5)) / 2

CURVE_POINTS = 401
SURFACE_POINTS = 101
FIGURES = ("fig2", "fig3", "fig5", "fig05", "fig6")

# base parameters of the figure datasets
FIG2_BASE = PhysicalParams(kappa=0.01, gamma_m=1e-5, delta=-1.0, g=0.05, n_bar=1e3)
FIG3_BASE = PhysicalParams(kappa=0.5, gamma_m=1e-5, delta=-1.0, g=0.1, n_bar=1e3)
FIG05_BASE = PhysicalParams(kappa=0.5, gamma_m=1e-5, delta=-1.0, g=0.2, n_bar=1e3)
FIG5_GAMMA_M = 1e-7
FIG5_N_GAMMA = 1e-2
FIG_DETUNING_RANGE = (-2.0, 0.0)
FIG_G_RANGE = (0.02, 0.4)
FIG6_G_RANGE = (0.01, 0.6)
FIG_KAPPA_RANGE = (0.05, 1.0)

_VARIANCE_NAMES = ("var_X_plus", "var_Y_plus", "var_X_minus", "var_Y_minus")


@dataclass(frozen=True)
class SweepAxis:
    """One grid axis: ``count`` points from ``start`` to ``stop``, or explicit ``points``."""
    name: str
    start: float = 0.0
    stop: float = 0.0
    count: int = 0
    scale: str = "linear"
    points: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        if self.name not in PARAMETERS:
            raise InvalidSweepSpec(f"unknown sweep parameter {self.name!r}, "
                                   f"expected one of {', '.join(PARAMETERS)}")
        if self.points is not None:
            points = tuple(float(p) for p in self.points)
            if not points or not all(math.isfinite(p) for p in points):
                raise InvalidSweepSpec(f"axis {self.name}: explicit points must be "
                                       "a non-empty list of finite numbers")
            object.__setattr__(self, "points", points)
            return
        if self.scale not in SCALES:
            raise InvalidSweepSpec(f"axis {self.name}: scale must be linear or log")
        if int(self.count) != self.count or self.count < 2:
            raise InvalidSweepSpec(f"axis {self.name}: count must be an integer >= 2")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise InvalidSweepSpec(f"axis {self.name}: endpoints must be finite")
        if self.start == self.stop:
            raise InvalidSweepSpec(f"axis {self.name}: start and stop coincide")
        if self.scale == "log" and (self.start <= 0 or self.stop <= 0):
            raise InvalidSweepSpec(f"axis {self.name}: log scale needs positive endpoints")
        object.__setattr__(self, "count", int(self.count))

    def values(self) -> np.ndarray:
        if self.points is not None:
            return np.array(self.points)
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)

    def __len__(self) -> int:
        return len(self.points) if self.points is not None else self.count


@dataclass(frozen=True)
class SweepSpec:
    axes: tuple[SweepAxis, ...]
    base: PhysicalParams
    model: str = "full"
    outputs: frozenset = field(default_factory=lambda: frozenset({"phonon", "stability"}))
    allow_unstable: bool = False

    def __post_init__(self):
        axes = tuple(self.axes)
        if not 1 <= len(axes) <= 2:
            raise InvalidSweepSpec(f"a sweep has one or two axes, got {len(axes)}")
        names = [axis.name for axis in axes]
        if len(set(names)) != len(names):
            raise InvalidSweepSpec(f"axis parameters repeat: {names}")
        if self.model not in MODELS:
            raise InvalidSweepSpec(f"model must be one of {', '.join(MODELS)}")
        outputs = frozenset(self.outputs)
        unknown = outputs - set(OUTPUTS)
        if unknown or not outputs:
            raise InvalidSweepSpec(f"outputs must be a non-empty subset of "
                                   f"{', '.join(OUTPUTS)}, got {sorted(outputs)}")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "outputs", outputs)

    @property
    def models(self) -> tuple[str, ...]:
        return ("rwa", "full") if self.model == "both" else (self.model,)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(axis) for axis in self.axes)

    def grid(self) -> list[tuple[float, ...]]:
        return list(itertools.product(*(axis.values() for axis in self.axes)))


def _columns(spec: SweepSpec) -> list[str]:
    columns = [axis.name for axis in spec.axes]
    for m in spec.models:
        if "stability" in spec.outputs:
            columns += [f"stable_{m}", f"max_real_part_{m}"]
        if "phonon" in spec.outputs:
            columns += [f"n_b_{m}", f"n_a_{m}"]
        if "variances" in spec.outputs:
            columns += [f"{name}_{m}" for name in _VARIANCE_NAMES]
            columns += [f"uncertainty_plus_{m}", f"uncertainty_minus_{m}"]
        if "closed_forms" in spec.outputs:
            if m == "rwa":
                columns.append("n_b_closed_rwa")
            else:
                columns += ["n_b_asymptotic_full", "var_Y_plus_asymptotic_full",
                            "var_X_minus_asymptotic_full"]
        columns.append(f"error_{m}")
    if "closed_forms" in spec.outputs:
        columns.append("instability_margin")
    return columns


def _closed_form_columns(params: PhysicalParams, m: str) -> dict:
    row: dict = {}
    try:
        if m == "rwa":
            row["n_b_closed_rwa"] = rwa_phonon_closed_form(params)
            return row
        # asymptotic red-sideband formulas at this (κ, g, γm·n̄)
        n_gamma = params.gamma_m * params.n_bar
        row["n_b_asymptotic_full"] = min_phonon_asymptotic(
            params.kappa, params.g, params.omega_m, n_gamma)
        (row["var_Y_plus_asymptotic_full"],
         row["var_X_minus_asymptotic_full"]) = variance_asymptotic(
            params.kappa, params.g, params.omega_m, n_gamma)
    except DomainError as exc:
        logger.debug("closed form unavailable at %s: %s", params, exc)
    return row


def _evaluate_model(params: PhysicalParams, m: str, spec: SweepSpec) -> dict:
    row: dict = {f"error_{m}": ""}
    if "closed_forms" in spec.outputs:
        row.update(_closed_form_columns(params, m))
    try:
        system = build_system(params, rwa=m == "rwa")
        report = stability(system)
        if "stability" in spec.outputs:
            row[f"stable_{m}"] = report.stable
            row[f"max_real_part_{m}"] = report.max_real_part
        if not report.stable and not spec.allow_unstable:
            row[f"error_{m}"] = "UnstableSystem"
            return row
        solution = solve_steady(system, spec.allow_unstable, report=report)
        row[f"residual_ok_{m}"] = solution.residual_ok
        mu = solution.moments
        if "phonon" in spec.outputs:
            row[f"n_b_{m}"] = phonon_number(mu, strict=report.stable)
            row[f"n_a_{m}"] = photon_number(mu, strict=report.stable)
        if "variances" in spec.outputs:
            vs = variances(mu)
            for name in _VARIANCE_NAMES:
                row[f"{name}_{m}"] = getattr(vs, name)
            plus, minus = vs.uncertainty_products
            row[f"uncertainty_plus_{m}"] = plus
            row[f"uncertainty_minus_{m}"] = minus
    except DomainError as exc:
        row[f"error_{m}"] = exc.code
    return row


def _evaluate_point(spec: SweepSpec, point: tuple[float, ...]) -> dict:
    row: dict = {axis.name: value for axis, value in zip(spec.axes, point)}
    try:
        params = spec.base.replace(**row)
    except OptocoolError as exc:
        for m in spec.models:
            row[f"error_{m}"] = exc.code
        return row
    for m in spec.models:
        row.update(_evaluate_model(params, m, spec))
    if "closed_forms" in spec.outputs:
        row["instability_margin"] = instability_margin(params)
    return row


def _frame(rows: list[dict], columns: list[str]) -> pd.DataFrame:
    frame = pd.DataFrame(rows, columns=columns)
    for name in columns:
        if name.startswith("error_"):
            frame[name] = frame[name].fillna("")
        elif name.startswith("stable_"):
            frame[name] = frame[name].astype("boolean").fillna(False).astype(bool)
    return frame


def run_sweep(spec: SweepSpec, threads: Optional[int] = None) -> SweepTable:
    """Evaluate ``spec`` on every grid point.

    Unstable points keep their stability columns and leave the observables
    empty unless ``allow_unstable`` is set; any other per-point failure is
    recorded by its error code in ``error_<model>``.
    """
    grid = spec.grid()
    logger.info("sweeping %s over %d points (%s model)",
                "x".join(a.name for a in spec.axes), len(grid), spec.model)
    rows = ordered_map(lambda point: _evaluate_point(spec, point), grid, threads)
    loose = sum(row.get(f"residual_ok_{m}") is False for row in rows for m in spec.models)
    if loose:
        logger.warning("%d steady states exceed the solver residual bound", loose)
    meta = {"axes": [a.name for a in spec.axes], "shape": list(spec.shape),
            "model": spec.model}
    return SweepTable(_frame(rows, _columns(spec)), meta)


def golden_section_minimize(f: Callable[[float], float], a: float, b: float,
                            tol: float = DETUNING_TOL) -> tuple[float, float]:
    """Golden-section search for a minimum of ``f`` on [a, b]."""
    c = b - (b - a) / PHI
    d = a + (b - a) / PHI
    fc, fd = f(c), f(d)
    while abs(b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - (b - a) / PHI
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + (b - a) / PHI
            fd = f(d)
    x = (a + b) / 2
    return x, f(x)


class _DetuningLine:
    """Drift matrices A(Δ) = A(0) + Δ·(A(1) − A(0)) of one parameter set.

    Δ enters the drift matrix linearly and the source not at all, so a scan
    costs one batched eigenvalue call and no system rebuild per point.
    """

    def __init__(self, base: PhysicalParams, rwa: bool, allow_unstable: bool):
        at_zero = build_system(base.replace(delta=0.0), rwa)
        at_one = build_system(base.replace(delta=1.0), rwa)
        self.offset = np.asarray(at_zero.A)
        self.slope = np.asarray(at_one.A) - self.offset
        self.source = -np.asarray(at_zero.B)
        self.allow_unstable = allow_unstable

    def phonon_numbers(self, deltas) -> np.ndarray:
        """Steady N_b at each detuning; inf where unstable, singular or negative."""
        deltas = np.atleast_1d(np.asarray(deltas, dtype=float))
        A = self.offset + deltas[:, None, None] * self.slope
        values = np.full(deltas.shape, math.inf)
        try:
            stable = np.max(np.linalg.eigvals(A).real, axis=1) < 0
        except np.linalg.LinAlgError:
            logger.debug("eigenvalue iteration failed on a detuning batch")
            return values
        usable = np.ones_like(stable) if self.allow_unstable else stable
        for k in np.flatnonzero(usable):
            try:
                n_b = np.linalg.solve(A[k], self.source)[1].real
            except np.linalg.LinAlgError:
                continue
            if n_b >= -PAIRING_TOL:
                values[k] = n_b
        return values

    def __call__(self, delta: float) -> float:
        return float(self.phonon_numbers(delta)[0])


def minimize_over_detuning(base: PhysicalParams, delta_range: Sequence[float],
                           model: str = "full",
                           allow_unstable: bool = False) -> tuple[float, float]:
    """Detuning of lowest steady phonon number, over stable points only.

    A 64-point scan brackets the basin, golden-section search refines it to
    1e-6 ωm. The refined value never exceeds the scan minimum.
    """
    if model not in ("rwa", "full"):
        raise InvalidSweepSpec(f"model must be rwa or full, got {model!r}")
    lo, hi = (float(v) for v in delta_range)
    if not lo < hi:
        raise InvalidSweepSpec(f"detuning range [{lo}, {hi}] is empty")

    objective = _DetuningLine(base, model == "rwa", allow_unstable)
    grid = np.linspace(lo, hi, COARSE_POINTS)
    values = objective.phonon_numbers(grid)
    if not np.any(np.isfinite(values)):
        raise NoStablePoint(f"no stable point for Δ in [{lo}, {hi}]")

    i = int(np.argmin(values))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, COARSE_POINTS - 1)]
    delta_star, n_star = golden_section_minimize(objective, a, b)
    if not n_star <= values[i]:
        delta_star, n_star = float(grid[i]), float(values[i])
    logger.debug("detuning minimum %.9f (N_b = %.6g), scan bracket [%.4f, %.4f]",
                 delta_star, n_star, a, b)
    return float(delta_star), float(n_star)


@dataclass(frozen=True)
class StabilityBoundary:
    param: str
    value: float
    reference: Optional[float]

    @property
    def offset(self) -> Optional[float]:
        """Distance from the D = 0 estimate, when that estimate exists."""
        if self.reference is None:
            return None
        return self.value - self.reference


def _d_zero_reference(base: PhysicalParams, param: str) -> Optional[float]:
    if param == "g":
        return math.sqrt(base.kappa ** 2 + 4 * base.omega_m ** 2) / 4
    return None


def locate_stability_boundary(base: PhysicalParams, param: str = "g",
                              lo: float = 0.0, hi: float = 1.0,
                              model: str = "full", xtol: float = 1e-10) -> StabilityBoundary:
    """Value of ``param`` in [lo, hi] where the largest real part of the spectrum crosses 0."""
    if param not in PARAMETERS:
        raise InvalidSweepSpec(f"unknown parameter {param!r}")
    rwa = model == "rwa"

    def margin(x: float) -> float:
        return stability(build_system(base.replace(**{param: x}), rwa)).max_real_part

    f_lo, f_hi = margin(lo), margin(hi)
    if f_lo >= 0 or f_hi < 0:
        raise NoStablePoint(f"no loss of stability for {param} in [{lo}, {hi}] "
                            f"(max real parts {f_lo:.3e}, {f_hi:.3e})")
    value = brentq(margin, lo, hi, xtol=xtol)
    boundary = StabilityBoundary(param=param, value=float(value),
                                 reference=_d_zero_reference(base, param))
    logger.info("stability lost at %s = %.10f", param, boundary.value)
    return boundary


def _curve_axis(resolution: Optional[int]) -> SweepAxis:
    return SweepAxis("delta", *FIG_DETUNING_RANGE, count=resolution or CURVE_POINTS)


def _fig2(resolution, n_bar, threads) -> SweepTable:
    spec = SweepSpec(axes=(SweepAxis("g", points=(0.05, 0.1)), _curve_axis(resolution)),
                     base=FIG2_BASE, model="rwa", outputs=frozenset({"phonon"}))
    table = run_sweep(spec, threads)
    return table.select(["delta", "g", "n_b_rwa"],
                        {"delta": "delta_over_omega_m", "g": "g_over_omega_m"})


def _fig3(resolution, n_bar, threads) -> SweepTable:
    spec = SweepSpec(axes=(SweepAxis("g", points=(0.1, 0.2, 0.3)), _curve_axis(resolution)),
                     base=FIG3_BASE, model="both", outputs=frozenset({"phonon", "stability"}))
    table = run_sweep(spec, threads)
    return table.select(["delta", "g", "n_b_full", "n_b_rwa", "stable_full"],
                        {"delta": "delta_over_omega_m", "g": "g_over_omega_m"})


def _fig05(resolution, n_bar, threads) -> SweepTable:
    spec = SweepSpec(axes=(_curve_axis(resolution),), base=FIG05_BASE.replace(n_bar=n_bar),
                     model="full", outputs=frozenset({"variances", "stability"}))
    table = run_sweep(spec, threads)
    columns = ["delta"] + [f"{name}_full" for name in _VARIANCE_NAMES] + ["stable_full"]
    rename = {"delta": "delta_over_omega_m"}
    rename.update({f"{name}_full": name for name in _VARIANCE_NAMES})
    return table.select(columns, rename)


def _surface_axes(g_range, resolution) -> tuple[SweepAxis, SweepAxis]:
    count = resolution or SURFACE_POINTS
    return (SweepAxis("g", *g_range, count=count),
            SweepAxis("kappa", *FIG_KAPPA_RANGE, count=count))


def _fig5_point(base: PhysicalParams, point: tuple[float, float]) -> dict:
    g, kappa = point
    params = base.replace(g=g, kappa=kappa)
    row = {"g_over_omega_m": g, "kappa_over_omega_m": kappa, "error": ""}
    try:
        row["delta_star_over_omega_m"], row["n_b_min_full"] = minimize_over_detuning(
            params, FIG_DETUNING_RANGE, "full")
    except DomainError as exc:
        row["error"] = exc.code
    try:
        row["n_b_asymptotic"] = min_phonon_asymptotic(
            kappa, g, params.omega_m, params.gamma_m * params.n_bar)
    except DomainError:
        pass
    return row


def _fig5(resolution, n_bar, threads) -> SweepTable:
    base = FIG3_BASE.replace(gamma_m=FIG5_GAMMA_M, n_bar=FIG5_N_GAMMA / FIG5_GAMMA_M)
    axes = _surface_axes(FIG_G_RANGE, resolution)
    grid = list(itertools.product(*(axis.values() for axis in axes)))
    rows = ordered_map(lambda point: _fig5_point(base, point), grid, threads)
    columns = ["g_over_omega_m", "kappa_over_omega_m", "delta_star_over_omega_m",
               "n_b_min_full", "n_b_asymptotic", "error"]
    frame = pd.DataFrame(rows, columns=columns)
    frame["error"] = frame["error"].fillna("")
    return SweepTable(frame, {"gamma_m": base.gamma_m, "n_gamma": FIG5_N_GAMMA})


def _fig6(resolution, n_bar, threads) -> SweepTable:
    spec = SweepSpec(axes=_surface_axes(FIG6_G_RANGE, resolution),
                     base=FIG05_BASE.replace(n_bar=n_bar), model="full",
                     outputs=frozenset({"variances", "stability", "closed_forms"}))
    table = run_sweep(spec, threads)
    frame = table.frame
    frame["in_validity_domain"] = frame["instability_margin"] > 0
    columns = (["g", "kappa"] + [f"{name}_full" for name in _VARIANCE_NAMES]
               + ["var_Y_plus_asymptotic_full", "var_X_minus_asymptotic_full",
                  "instability_margin", "in_validity_domain", "stable_full", "error_full"])
    rename = {"g": "g_over_omega_m", "kappa": "kappa_over_omega_m",
              "var_Y_plus_asymptotic_full": "var_Y_plus_asymptotic",
              "var_X_minus_asymptotic_full": "var_X_minus_asymptotic",
              "error_full": "error"}
    rename.update({f"{name}_full": name for name in _VARIANCE_NAMES})
    return table.select(columns, rename)


_BUILDERS = {"fig2": _fig2, "fig3": _fig3, "fig5": _fig5, "fig05": _fig05, "fig6": _fig6}


def figure_dataset(figure_id: str, resolution: Optional[int] = None,
                   n_bar: float = 1e3, threads: Optional[int] = None) -> SweepTable:
    """Plot-ready grid and outputs behind one of the cooling/squeezing figures.

    ``resolution`` overrides the point count of the detuning axis (curves)
    or of both axes (surfaces); ``n_bar`` applies to fig05 and fig6.
    """
    if figure_id not in _BUILDERS:
        raise InvalidSweepSpec(f"unknown figure {figure_id!r}, "
                               f"expected one of {', '.join(FIGURES)}")
    if resolution is not None and resolution < 2:
        raise InvalidSweepSpec("figure resolution must be >= 2")
    table = _BUILDERS[figure_id](resolution, n_bar, threads)
    table.meta["figure"] = figure_id
    return table

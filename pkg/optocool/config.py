"""
YAML run configuration.

A document holds exactly one parameter block, ``effective`` or ``drive``,
plus optional ``command``, ``output``, ``sweep``, ``evolve``, ``figure`` and
``options`` blocks. Unknown keys are rejected with their dotted path and
every default is written out in the parsed result.
"""
from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Optional

import yaml

from .errors import ConfigError, RangeError, SchemaError
from .model import (DriveConfig, PhysicalParams, WorkingPoint, classical_working_point,
                    thermal_occupation, to_effective)
from .sweep import FIGURES, MODELS, OUTPUTS, SweepAxis
from .tables import FORMATS

logger = logging.getLogger(__name__)

COMMANDS = ("steady", "sweep", "evolve", "figure", "check")
EVOLVE_METHODS = ("auto", "eigen", "integrate")
INITIAL_STATES = ("thermal", "vacuum")

_EFFECTIVE_KEYS = {"kappa", "gamma_m", "delta", "g", "n_bar", "temperature", "omega_m_si"}
_DRIVE_KEYS = {"E", "delta_0", "g0", "kappa", "gamma_m", "n_bar", "temperature", "omega_m_si"}
_TOP_KEYS = {"effective", "drive", "command", "output", "sweep", "evolve", "figure", "options"}


@dataclass(frozen=True)
class SweepSettings:
    axes: tuple[SweepAxis, ...]
    outputs: frozenset


@dataclass(frozen=True)
class EvolveSettings:
    t_max: Optional[float] = None
    points: int = 50
    method: str = "auto"
    initial: str = "thermal"


@dataclass(frozen=True)
class FigureSettings:
    id: Optional[str] = None
    n_bar: float = 1e3
    resolution: Optional[int] = None


@dataclass(frozen=True)
class RunConfig:
    mode: str
    params: PhysicalParams
    command: Optional[str] = None
    model: str = "full"
    output_path: Optional[str] = None
    output_format: str = "csv"
    allow_unstable: bool = False
    tol: float = 1e-6
    threads: Optional[int] = None
    sweep: Optional[SweepSettings] = None
    evolve: EvolveSettings = field(default_factory=EvolveSettings)
    figure: FigureSettings = field(default_factory=FigureSettings)
    drive: Optional[DriveConfig] = None
    working_point: Optional[WorkingPoint] = None

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)

    def with_overrides(self, out: Optional[str] = None, fmt: Optional[str] = None,
                       allow_unstable: bool = False, n_bar: Optional[float] = None,
                       tol: Optional[float] = None) -> "RunConfig":
        """Apply command-line flags on top of the document."""
        changes: dict = {}
        if out is not None:
            changes["output_path"] = out
        if fmt is not None:
            changes["output_format"] = _choice(fmt, FORMATS, "output.format")
        if allow_unstable:
            changes["allow_unstable"] = True
        if n_bar is not None:
            n_bar = _number(n_bar, "n_bar", minimum=0.0)
            changes["params"] = self.params.replace(n_bar=n_bar)
            changes["figure"] = dataclasses.replace(self.figure, n_bar=n_bar)
            if self.drive is not None:
                changes["drive"] = dataclasses.replace(self.drive, n_bar=n_bar)
        if tol is not None:
            changes["tol"] = _number(tol, "options.tol", minimum=0.0)
        return self.replace(**changes)

    def as_dict(self) -> dict:
        """Fully resolved configuration, used as JSON provenance."""
        doc: dict = {
            "mode": self.mode,
            "effective": dataclasses.asdict(self.params),
            "command": {"name": self.command, "model": self.model},
            "output": {"path": self.output_path, "format": self.output_format},
            "options": {"allow_unstable": self.allow_unstable, "tol": self.tol,
                        "threads": self.threads},
            "evolve": dataclasses.asdict(self.evolve),
            "figure": dataclasses.asdict(self.figure),
        }
        if self.drive is not None:
            E = self.drive.drive_strength_E
            doc["drive"] = {"E": [E.real, E.imag], "delta_0": self.drive.delta_0,
                            "g0": self.drive.g0, "kappa": self.drive.kappa,
                            "gamma_m": self.drive.gamma_m, "n_bar": self.drive.n_bar}
            doc["working_point"] = {"photon_occupancy": self.working_point.photon_occupancy,
                                    "delta_eff": self.working_point.delta_eff,
                                    "g_enhanced": self.working_point.g_enhanced}
        if self.sweep is not None:
            doc["sweep"] = {
                "axes": [{k: v for k, v in dataclasses.asdict(a).items() if v is not None}
                         for a in self.sweep.axes],
                "outputs": sorted(self.sweep.outputs),
            }
        return doc


# --- field readers -----------------------------------------------------------

def _join(path: str, key: str) -> str:
    return f"{path}.{key}" if path else key


def _mapping(value: Any, path: str, allowed: set) -> dict:
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise SchemaError(path, f"expected a mapping, got {type(value).__name__}")
    for key in value:
        if key not in allowed:
            raise SchemaError(_join(path, str(key)), "unknown key")
    return value


def _number(value: Any, path: str, minimum: Optional[float] = None) -> float:
    if isinstance(value, bool):
        raise SchemaError(path, "expected a number, got a boolean")
    if isinstance(value, str):
        # YAML 1.1 reads exponents without a dot (1e-5) as strings
        try:
            value = float(value)
        except ValueError:
            raise SchemaError(path, f"expected a number, got {value!r}") from None
    if not isinstance(value, (int, float)):
        raise SchemaError(path, f"expected a number, got {type(value).__name__}")
    value = float(value)
    if not math.isfinite(value):
        raise RangeError(path, f"must be finite, got {value!r}")
    if minimum is not None and value < minimum:
        raise RangeError(path, f"must be >= {minimum:g}, got {value!r}")
    return value


def _integer(value: Any, path: str, minimum: int) -> int:
    number = _number(value, path)
    if number != int(number):
        raise SchemaError(path, f"expected an integer, got {value!r}")
    if number < minimum:
        raise RangeError(path, f"must be >= {minimum}, got {int(number)}")
    return int(number)


def _boolean(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise SchemaError(path, f"expected true or false, got {value!r}")
    return value


def _choice(value: Any, choices: tuple, path: str) -> str:
    if value not in choices:
        raise SchemaError(path, f"expected one of {', '.join(choices)}, got {value!r}")
    return value


def _complex(value: Any, path: str) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise SchemaError(path, "expected a number or a [re, im] pair")
        return complex(_number(value[0], f"{path}[0]"), _number(value[1], f"{path}[1]"))
    return complex(_number(value, path))


def _required(block: dict, key: str, path: str) -> Any:
    if key not in block:
        raise SchemaError(_join(path, key), "missing required key")
    return block[key]


def _rescoped(exc: RangeError, path: str) -> RangeError:
    return RangeError(_join(path, exc.path), exc.reason)


# --- parameter blocks --------------------------------------------------------

def _occupation(block: dict, path: str, omega_m_si: Optional[float]) -> float:
    if "n_bar" in block and "temperature" in block:
        raise SchemaError(path, "n_bar and temperature are mutually exclusive")
    if "temperature" in block:
        if omega_m_si is None:
            raise SchemaError(_join(path, "temperature"), "needs omega_m_si (rad/s)")
        temperature = _number(block["temperature"], _join(path, "temperature"), minimum=0.0)
        n_bar = thermal_occupation(omega_m_si, temperature)
        logger.info("thermal occupation %.6g at T = %g K", n_bar, temperature)
        return n_bar
    return _number(_required(block, "n_bar", path), _join(path, "n_bar"))


def _rate_unit(block: dict, path: str) -> Optional[float]:
    if "omega_m_si" not in block:
        return None
    value = _number(block["omega_m_si"], _join(path, "omega_m_si"))
    if value <= 0:
        raise RangeError(_join(path, "omega_m_si"), "must be > 0")
    return value


def _effective(raw: Any) -> PhysicalParams:
    path = "effective"
    block = _mapping(raw, path, _EFFECTIVE_KEYS)
    omega_m_si = _rate_unit(block, path)
    unit = omega_m_si or 1.0
    rates = {key: _number(_required(block, key, path), _join(path, key)) / unit
             for key in ("kappa", "gamma_m", "delta", "g")}
    try:
        return PhysicalParams(n_bar=_occupation(block, path, omega_m_si), **rates)
    except RangeError as exc:
        raise _rescoped(exc, path) from None


def _drive(raw: Any) -> DriveConfig:
    path = "drive"
    block = _mapping(raw, path, _DRIVE_KEYS)
    omega_m_si = _rate_unit(block, path)
    unit = omega_m_si or 1.0
    rates = {key: _number(_required(block, key, path), _join(path, key)) / unit
             for key in ("delta_0", "g0", "kappa", "gamma_m")}
    E = _complex(_required(block, "E", path), _join(path, "E")) / unit
    try:
        return DriveConfig(drive_strength_E=E, n_bar=_occupation(block, path, omega_m_si),
                           **rates)
    except RangeError as exc:
        raise _rescoped(exc, path) from None


# --- command blocks ----------------------------------------------------------

def _axis(raw: Any, path: str) -> SweepAxis:
    block = _mapping(raw, path, {"name", "start", "stop", "count", "scale", "values"})
    name = _choice(_required(block, "name", path), ("delta", "g", "kappa", "gamma_m", "n_bar"),
                   _join(path, "name"))
    if "values" in block:
        extra = set(block) - {"name", "values"}
        if extra:
            raise SchemaError(_join(path, sorted(extra)[0]), "not allowed together with values")
        values = block["values"]
        if not isinstance(values, list):
            raise SchemaError(_join(path, "values"), "expected a list")
        points = tuple(_number(v, f"{_join(path, 'values')}[{i}]") for i, v in enumerate(values))
        return SweepAxis(name, points=points)
    return SweepAxis(
        name,
        start=_number(_required(block, "start", path), _join(path, "start")),
        stop=_number(_required(block, "stop", path), _join(path, "stop")),
        count=_integer(_required(block, "count", path), _join(path, "count"), minimum=2),
        scale=_choice(block.get("scale", "linear"), ("linear", "log"), _join(path, "scale")),
    )


def _sweep(raw: Any) -> Optional[SweepSettings]:
    if raw is None:
        return None
    block = _mapping(raw, "sweep", {"axes", "outputs"})
    axes = _required(block, "axes", "sweep")
    if not isinstance(axes, list) or not 1 <= len(axes) <= 2:
        raise SchemaError("sweep.axes", "expected a list of one or two axes")
    outputs = block.get("outputs", ["phonon", "stability"])
    if not isinstance(outputs, list) or not outputs:
        raise SchemaError("sweep.outputs", "expected a non-empty list")
    for i, name in enumerate(outputs):
        _choice(name, OUTPUTS, f"sweep.outputs[{i}]")
    return SweepSettings(axes=tuple(_axis(a, f"sweep.axes[{i}]") for i, a in enumerate(axes)),
                         outputs=frozenset(outputs))


def _evolve(raw: Any) -> EvolveSettings:
    block = _mapping(raw, "evolve", {"t_max", "points", "method", "initial"})
    t_max = block.get("t_max")
    if t_max is not None:
        t_max = _number(t_max, "evolve.t_max")
        if t_max <= 0:
            raise RangeError("evolve.t_max", "must be > 0")
    return EvolveSettings(
        t_max=t_max,
        points=_integer(block.get("points", 50), "evolve.points", minimum=2),
        method=_choice(block.get("method", "auto"), EVOLVE_METHODS, "evolve.method"),
        initial=_choice(block.get("initial", "thermal"), INITIAL_STATES, "evolve.initial"),
    )


def _figure(raw: Any) -> FigureSettings:
    block = _mapping(raw, "figure", {"id", "n_bar", "resolution"})
    figure_id = block.get("id")
    if figure_id is not None:
        _choice(figure_id, FIGURES, "figure.id")
    resolution = block.get("resolution")
    if resolution is not None:
        resolution = _integer(resolution, "figure.resolution", minimum=2)
    return FigureSettings(id=figure_id,
                          n_bar=_number(block.get("n_bar", 1e3), "figure.n_bar", minimum=0.0),
                          resolution=resolution)


def _command(raw: Any) -> tuple[Optional[str], str]:
    if isinstance(raw, str):
        raw = {"name": raw}
    block = _mapping(raw, "command", {"name", "model"})
    name = block.get("name")
    if name is not None:
        _choice(name, COMMANDS, "command.name")
    return name, _choice(block.get("model", "full"), MODELS, "command.model")


def parse_config(text: str) -> RunConfig:
    """Parse and validate a YAML run configuration."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise SchemaError("", f"not valid YAML: {exc}") from exc
    doc = _mapping(doc, "", _TOP_KEYS)

    present = [key for key in ("effective", "drive") if key in doc]
    if len(present) != 1:
        raise SchemaError("", "exactly one of 'effective' or 'drive' is required, "
                              f"found {present or 'neither'}")

    drive = working_point = None
    if "effective" in doc:
        params = _effective(doc["effective"])
    else:
        drive = _drive(doc["drive"])
        working_point = classical_working_point(drive)
        params = to_effective(drive)
        logger.info("working point: n_c = %.6g, Δ = %.6g, g = %.6g",
                    working_point.photon_occupancy, params.delta, params.g)

    command, model = _command(doc.get("command"))
    output = _mapping(doc.get("output"), "output", {"path", "format"})
    path = output.get("path")
    if path is not None and not isinstance(path, str):
        raise SchemaError("output.path", "expected a string or null")
    options = _mapping(doc.get("options"), "options", {"allow_unstable", "tol", "threads"})
    threads = options.get("threads")
    if threads is not None:
        threads = _integer(threads, "options.threads", minimum=1)

    return RunConfig(
        mode=present[0],
        params=params,
        command=command,
        model=model,
        output_path=path,
        output_format=_choice(output.get("format", "csv"), FORMATS, "output.format"),
        allow_unstable=_boolean(options.get("allow_unstable", False), "options.allow_unstable"),
        tol=_number(options.get("tol", 1e-6), "options.tol", minimum=0.0),
        threads=threads,
        sweep=_sweep(doc.get("sweep")),
        evolve=_evolve(doc.get("evolve")),
        figure=_figure(doc.get("figure")),
        drive=drive,
        working_point=working_point,
    )


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read configuration {path}: {exc.strerror}") from exc
    return parse_config(text)

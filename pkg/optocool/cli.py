"""
Command line interface::

    optocool <steady|sweep|evolve|figure|check> [--config PATH] [--out PATH]
             [--format csv|json] [--allow-unstable] [--n-bar VAL] [--tol VAL]

Exit status is 0 on success, 1 when the physics or numerics refuse a
request and 2 for configuration errors.
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .checks import run_checks
from .config import RunConfig, load_config
from .errors import ConfigError, DomainError, SchemaError
from .moments import MomentVector, build_system
from .observables import cooling_comparison, steady_report
from .solve import evolve, slowest_rate
from .sweep import FIG05_BASE, FIGURES, SweepSpec, figure_dataset, run_sweep
from .tables import SweepTable, steady_table, trajectory_table, write_table

logger = logging.getLogger("optocool")

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_CONFIG = 2

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="YAML run configuration")
    common.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), help="output format")
    common.add_argument("--allow-unstable", action="store_true",
                        help="report steady states of unstable drift matrices")
    common.add_argument("--n-bar", type=float, metavar="VAL",
                        help="override the mechanical bath occupation")
    common.add_argument("--tol", type=float, metavar="VAL",
                        help="squeezing classification tolerance")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(
        prog="optocool",
        description="Ground-state cooling and squeezing in linearized cavity optomechanics.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    commands.add_parser("steady", parents=[common], help="one-point steady-state report")
    commands.add_parser("sweep", parents=[common], help="parameter grid")
    commands.add_parser("evolve", parents=[common], help="moment trajectory")
    figure = commands.add_parser("figure", parents=[common], help="figure dataset")
    figure.add_argument("figure_id", nargs="?", choices=FIGURES)
    figure.add_argument("--resolution", type=int, metavar="N",
                        help="points per axis (default 401 for curves, 101 for surfaces)")
    commands.add_parser("check", parents=[common], help="oracle-equivalence suite")
    return parser


def configure_logging(verbose: bool) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logging.captureWarnings(True)
    for name in ("optocool", "py.warnings"):
        log = logging.getLogger(name)
        log.handlers[:] = [handler]
        log.setLevel(logging.DEBUG if verbose else logging.WARNING)


def _default_config() -> RunConfig:
    return RunConfig(mode="effective", params=FIG05_BASE)


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Load ``--config`` (or built-in defaults) and apply the command-line flags."""
    if args.config is None:
        if args.command in ("steady", "sweep", "evolve"):
            raise SchemaError("", f"'{args.command}' needs --config")
        config = _default_config()
    else:
        config = load_config(args.config)
    config = config.with_overrides(out=args.out, fmt=args.format,
                                   allow_unstable=args.allow_unstable,
                                   n_bar=args.n_bar, tol=args.tol)
    return config.replace(command=args.command)


def _emit(table: SweepTable, config: RunConfig) -> None:
    write_table(table, config.output_path, config.output_format, config.as_dict())


def _steady(config: RunConfig, args) -> int:
    models = ("rwa", "full") if config.model == "both" else (config.model,)
    reports = [steady_report(config.params, m, config.allow_unstable, config.tol)
               for m in models]
    table = steady_table(reports)
    if config.model == "both":
        comparison = cooling_comparison(config.params, config.allow_unstable)
        table.meta["full_minus_rwa"] = comparison.difference
        logger.info("full - RWA phonon number: %.6g", comparison.difference)
    _emit(table, config)
    return EXIT_OK


def _sweep(config: RunConfig, args) -> int:
    if config.sweep is None:
        raise SchemaError("sweep", "the sweep command needs a sweep block")
    spec = SweepSpec(axes=config.sweep.axes, base=config.params, model=config.model,
                     outputs=config.sweep.outputs, allow_unstable=config.allow_unstable)
    _emit(run_sweep(spec, config.threads), config)
    return EXIT_OK


def _evolve(config: RunConfig, args) -> int:
    if config.model == "both":
        raise SchemaError("command.model", "evolve takes rwa or full")
    system = build_system(config.params, rwa=config.model == "rwa")
    settings = config.evolve
    t_max = settings.t_max
    if t_max is None:
        rate = slowest_rate(system)
        if rate == 0:
            raise SchemaError("evolve.t_max", "no decay rate to derive a horizon from")
        t_max = 20 / rate
        logger.info("evolution horizon t_max = %.6g (20 slowest decay times)", t_max)
    start = (MomentVector.thermal(config.params.n_bar) if settings.initial == "thermal"
             else MomentVector.vacuum())
    trajectory = evolve(system, start, np.linspace(0, t_max, settings.points),
                        method=settings.method)
    _emit(trajectory_table(trajectory), config)
    return EXIT_OK


def _figure(config: RunConfig, args) -> int:
    figure_id = getattr(args, "figure_id", None) or config.figure.id
    if figure_id is None:
        raise SchemaError("figure.id", f"name a figure: {', '.join(FIGURES)}")
    resolution = getattr(args, "resolution", None) or config.figure.resolution
    table = figure_dataset(figure_id, resolution=resolution, n_bar=config.figure.n_bar,
                           threads=config.threads)
    _emit(table, config)
    return EXIT_OK


def _check(config: RunConfig, args) -> int:
    results = run_checks()
    for result in results:
        print(result.line())
    passed = sum(r.passed for r in results)
    print(f"\n{passed}/{len(results)} checks passed")
    return EXIT_OK if passed == len(results) else EXIT_DOMAIN


_COMMANDS = {"steady": _steady, "sweep": _sweep, "evolve": _evolve,
             "figure": _figure, "check": _check}


def _fail(exc, status: int) -> int:
    print(f"error: {exc.code}: {exc}", file=sys.stderr)
    return status


def run(config: RunConfig, args: Optional[argparse.Namespace] = None) -> int:
    """Execute ``config.command``; returns the process exit status."""
    try:
        return _COMMANDS[config.command](config, args)
    except ConfigError as exc:
        return _fail(exc, EXIT_CONFIG)
    except DomainError as exc:
        return _fail(exc, EXIT_DOMAIN)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        config = resolve_config(args)
    except ConfigError as exc:
        return _fail(exc, EXIT_CONFIG)
    except DomainError as exc:
        return _fail(exc, EXIT_DOMAIN)
    return run(config, args)


if __name__ == "__main__":
    sys.exit(main())

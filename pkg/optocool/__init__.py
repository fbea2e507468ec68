"""
optocool: ground-state cooling and quadrature squeezing in linearized cavity
optomechanics, with and without the rotating-wave approximation.

Basic usage::

    from optocool import PhysicalParams, build_system, steady_state, phonon_number

    params = PhysicalParams(kappa=0.5, gamma_m=1e-5, delta=-1.0, g=0.2, n_bar=1e3)
    n_b = phonon_number(steady_state(build_system(params, rwa=False)))
"""

__version__ = "0.1.0"

from .errors import (BistableWorkingPoint, ConfigError, DegenerateDenominator, DomainError,
                     EigenFailure, InvalidSweepSpec, NegativeOccupation, NoPhysicalRoot,
                     NonHermitianInput, NoStablePoint, OptocoolError, OutsideValidity,
                     PhysicsWarning, RangeError, SchemaError, SingularDrift,
                     StiffnessFailure, UnstableSystem)
from .model import (DriveConfig, PhysicalParams, WorkingPoint, classical_working_point,
                    cubic_roots, instability_margin, thermal_occupation, to_effective)
from .moments import (MomentVector, DriftSystem, build_full_system, build_rwa_system,
                      build_system, conjugate_swap)
from .solve import (StabilityReport, SteadySolution, Trajectory, evolve, slowest_rate,
                    solve_steady, stability, steady_state)
from .observables import (FieldKind, VarianceSet, classify_field, cooling_comparison,
                          min_phonon_asymptotic, min_phonon_breakdown, phonon_number,
                          photon_number, rwa_phonon_closed_form, rwa_resonant_phonon,
                          steady_report, variance_asymptotic, variances)
from .parallel import (get_hardware_concurrency, get_optimal_thread_count,
                       get_sweep_threads, reset_sweep_threads, set_sweep_threads)
from .tables import SweepTable, read_csv, to_csv, to_json
from .sweep import (SweepAxis, SweepSpec, figure_dataset, locate_stability_boundary,
                    minimize_over_detuning, run_sweep)
from .config import RunConfig, parse_config

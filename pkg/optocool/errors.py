"""
Exception hierarchy for optocool.

Every error exposes a stable ``code`` (its class name). ``DomainError``
subclasses are physics or numerics refusals, ``ConfigError`` subclasses are
bad input documents; the CLI maps them to exit codes 1 and 2.
"""
from __future__ import annotations


class OptocoolError(Exception):
    """Base class of all optocool errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


class PhysicsWarning(UserWarning):
    """Parameters outside the regime where the model is trustworthy."""


# --- domain errors -----------------------------------------------------------

class DomainError(OptocoolError):
    """A well-formed request the physics or the numerics refuse."""


class BistableWorkingPoint(DomainError):
    def __init__(self, roots):
        self.roots = tuple(float(r) for r in roots)
        listed = ", ".join(f"{r:.12g}" for r in self.roots)
        super().__init__(
            f"working point is not unique, photon-number roots: [{listed}]")


class NoPhysicalRoot(DomainError):
    pass


class SingularDrift(DomainError):
    def __init__(self, min_pivot: float, threshold: float):
        self.min_pivot = min_pivot
        self.threshold = threshold
        super().__init__(
            f"drift matrix is singular: smallest pivot {min_pivot:.3e} "
            f"below {threshold:.3e}")


class UnstableSystem(DomainError):
    def __init__(self, report):
        self.report = report
        super().__init__(
            f"drift matrix is unstable (max real part "
            f"{report.max_real_part:.6g}); pass allow_unstable to override")


class EigenFailure(DomainError):
    pass


class StiffnessFailure(DomainError):
    pass


class NegativeOccupation(DomainError):
    pass


class DegenerateDenominator(DomainError):
    pass


class OutsideValidity(DomainError):
    pass


class NonHermitianInput(DomainError):
    pass


class NoStablePoint(DomainError):
    pass


# --- configuration errors ----------------------------------------------------

class ConfigError(OptocoolError):
    """Malformed configuration or sweep definition."""


class SchemaError(ConfigError):
    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"{path or '<root>'}: {reason}")


class RangeError(ConfigError):
    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


class InvalidSweepSpec(ConfigError):
    pass

"""Exceptions for the package."""
from __future__ import annotations

from typing import Any


class ZonalCycleError(Exception):
    """General package exception"""


class ConfigSchemaError(ZonalCycleError):
    """Indicates that a read file does not match the prescribed schema."""


class ExactArithmeticError(ZonalCycleError):
    """Indicates a division by an exact zero or a failed exact back-substitution."""


class SingularBlockError(ExactArithmeticError):
    """Indicates a singular exact linear system. `label` names the weight block."""

    def __init__(self, label: str) -> None:
        super().__init__(f"singular system at weight block {label}")
        self.label = label


class ConventionError(ZonalCycleError):
    """
    Indicates that the triangular R-matrix ansatz for a weight block has no solution or
    more than one.
    """


class WeightMismatchError(ZonalCycleError):
    """Indicates vectors or tensor factors with incompatible weights."""


class DualVectorError(ZonalCycleError):
    """Indicates a dual vector where a module vector is required."""


class NotEigenvectorError(ZonalCycleError):
    """Indicates that a braiding did not map a vector to a multiple of itself."""

    def __init__(self, message: str, residual: Any) -> None:
        super().__init__(message)
        self.residual = residual


class DiagramError(ZonalCycleError):
    """Indicates invalid marked points, an out-of-range point or a bad box addition."""


class DomainError(ZonalCycleError):
    """Indicates invalid integrand parameters or a point outside the cycle."""


class QuadratureNonConvergence(ZonalCycleError):
    """Indicates two successive quadrature refinements that disagree."""

    def __init__(self, coarse: float, fine: float, tolerance: float) -> None:
        super().__init__(
            f"quadrature did not converge: {coarse!r} vs {fine!r} (tol {tolerance:g})"
        )
        self.coarse = coarse
        self.fine = fine
        self.tolerance = tolerance


class GammaPoleError(ZonalCycleError):
    """Indicates a nonpositive Gamma argument in a closed form."""


class GuardError(ZonalCycleError):
    """Indicates a size guard was exceeded without the override flag."""


class InconsistentSystemError(ExactArithmeticError):
    """Indicates an exact linear system without solution. `label` names the block."""

    def __init__(self, label: str) -> None:
        super().__init__(f"inconsistent system at weight block {label}")
        self.label = label

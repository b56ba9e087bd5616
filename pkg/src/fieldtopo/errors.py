"""Exception hierarchy shared across the package."""

from __future__ import annotations


class FieldTopoError(Exception):
    """Base class for all package-specific errors."""


class ParseError(FieldTopoError):
    """Syntax or identifier error, with a character offset into the source."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (offset {position})")
        self.position = position


class DomainError(FieldTopoError):
    """Evaluation left the function's domain (sqrt of negative, zero divide)."""


class MeshError(FieldTopoError):
    """Invalid mesh structure."""


class NonManifoldError(MeshError):
    """A face is shared by more than two top simplices."""


class RegularityError(FieldTopoError):
    """Level-set extraction hit a point where the gradient nearly vanishes."""


class TubeRadiusError(FieldTopoError):
    """Tube radius exceeds half the clearance of the spine curve."""


class VanishingFieldError(FieldTopoError):
    """Field vanishes at an evaluation point of a Gauss map."""


class DegreeUndecidedError(FieldTopoError):
    """Refinement budget exhausted before the degree estimate stabilized."""


class NonHyperbolicError(FieldTopoError):
    """Jacobian has an eigenvalue too close to the imaginary axis."""


class IsolationError(FieldTopoError):
    """A second equilibrium was detected where exactly one was required."""


class BoundaryEquilibriumError(FieldTopoError):
    """Field vanishes on a boundary component."""


class LyapunovHypothesisError(FieldTopoError):
    """Descent condition grad(V) . X < 0 failed at a mesh vertex."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NoReturnError(FieldTopoError):
    """Trajectory never returned to the section within the budget."""


class NonContractingError(FieldTopoError):
    """Poincare returns do not contract; no isolated cycle from this seed."""


class ScenarioError(FieldTopoError):
    """Scenario file failed validation."""

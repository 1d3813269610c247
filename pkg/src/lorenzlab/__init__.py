"""Numerical bifurcation-analysis toolkit for the classical Lorenz system."""

__version__ = "0.1.0"

from .dynamics import (
    LorenzParams,
    State,
    ToleranceSpec,
    Trajectory,
    integrate,
    integrate_variational,
    integrate_with_events,
    jacobian,
    vector_field,
)
from .equilibria import Equilibrium, classify, equilibria, find_hopf_numeric, hopf_threshold
from .errors import (
    BracketError,
    ConvergenceError,
    DomainError,
    GeometryError,
    InsufficientDataError,
    IntegrationError,
    ToolkitError,
)

__all__ = [
    "LorenzParams",
    "State",
    "ToleranceSpec",
    "Trajectory",
    "Equilibrium",
    "integrate",
    "integrate_variational",
    "integrate_with_events",
    "jacobian",
    "vector_field",
    "classify",
    "equilibria",
    "find_hopf_numeric",
    "hopf_threshold",
    "ToolkitError",
    "DomainError",
    "IntegrationError",
    "BracketError",
    "GeometryError",
    "ConvergenceError",
    "InsufficientDataError",
]

"""Critical points of master functions on very affine varieties."""

from .solve import (
    GenericityError,
    PartialSolveWarning,
    SolutionSet,
    SolveError,
    TrackerConfig,
    count_critical,
    genericity_check,
    random_weights,
    solve,
)
from .system import MasterProblem, PolySystem, TorusCI, critical_system, load_torus_ci

__all__ = [
    "GenericityError",
    "MasterProblem",
    "PartialSolveWarning",
    "PolySystem",
    "SolutionSet",
    "SolveError",
    "TorusCI",
    "TrackerConfig",
    "count_critical",
    "critical_system",
    "genericity_check",
    "load_torus_ci",
    "random_weights",
    "solve",
]

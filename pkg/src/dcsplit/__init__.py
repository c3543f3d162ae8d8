"""Averaged Douglas-Rachford splitting for DC programs.

Solves ``min_x f(x) + g(x) - h(x)`` with ``f``, ``g`` convex (accessed
through their proximal maps) and ``h`` convex with Lipschitz gradient.
"""

from .core import (AlphaSchedule, DCProblem, IterateState, KappaSchedule,
                   RunTrace, SolverConfig, StopRule, check_assumption,
                   evaluate_objective)
from .errors import (ConfigError, DataError, EmptyInput, MissingColumn,
                     NonFinite, NotConverged, ParseError, SingleClass,
                     SingularMatrix)
from .solvers import Method, MethodTag, RunResult, solve

__version__ = "0.1.0"

__all__ = [
    "AlphaSchedule", "DCProblem", "IterateState", "KappaSchedule", "RunTrace",
    "SolverConfig", "StopRule", "check_assumption", "evaluate_objective",
    "ConfigError", "DataError", "EmptyInput", "MissingColumn", "NonFinite",
    "NotConverged", "ParseError", "SingleClass", "SingularMatrix",
    "Method", "MethodTag", "RunResult", "solve",
]

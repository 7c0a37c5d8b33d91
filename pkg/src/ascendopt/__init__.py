"""Separable convex minimisation under ascending linear constraints."""

from .errors import (
    BracketError,
    DomainError,
    EmptyFeasible,
    ExistenceError,
    InternalSolverError,
    LengthMismatch,
    ParseError,
    RangeError,
    TraceError,
    ValidationError,
)
from .kkt import KktCertificate, check_feasibility, check_kkt, compute_multipliers
from .oracle import OracleConfig, dominates, oracle_solve, value_function
from .problem import (
    CoordinateFunction,
    CustomFamily,
    Family,
    ProblemInstance,
    ValidationReport,
    canonicalize_alpha,
    objective,
    validate_instance,
)
from .scalar import QueryKind, ThetaQuery, ThetaResult, analytic_theta, capped_inverse, least_theta
from .solver import Case, Label, Solution, SolverTrace, solve
from .tolerances import Tolerances

__version__ = "0.1.0"

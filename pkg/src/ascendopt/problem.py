"""Problem instances, the built-in coordinate function families and validation.

An instance asks to minimise ``sum_m g_m(y_m)`` subject to

* ``0 <= y_m <= beta_m`` for every coordinate,
* ``sum_{m<=l} y_m >= sum_{m<=l} alpha_m`` for ``l = 1..L-1`` (ascending constraints),
* ``sum_m y_m == sum_{m<=K} alpha_m``.

Each ``g_m`` is strictly convex and continuously differentiable on an open
interval ``(a_m, b_m)`` containing 0, and is described here through its
derivative ``h_m`` and the inverse of that derivative.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError

INF = math.inf


class Family(enum.Enum):
    LOG_THROUGHPUT = "log_throughput"
    INVERSE_POWER = "inverse_power"
    QUADRATIC = "quadratic"
    CUSTOM = "custom"


@dataclass(frozen=True)
class CustomFamily:
    """User-supplied strictly convex function.

    The caller asserts convexity; nothing here checks it. ``h`` must be the
    continuous, strictly increasing derivative of ``g`` on ``(domain_lo,
    domain_hi)`` and ``h_inv`` its inverse on ``(range_lo, range_hi)``.
    """

    g: Callable[[float], float]
    h: Callable[[float], float]
    h_inv: Callable[[float], float]
    domain_lo: float
    domain_hi: float
    range_lo: float
    range_hi: float
    name: str = "custom"


@dataclass(frozen=True)
class CoordinateFunction:
    """One coordinate ``g_m`` of the separable objective, plus its cap ``beta_m``.

    ``cap = inf`` means the upper bound coincides with the domain end ``b_m``
    and is therefore inactive.
    """

    family: Family
    sigma2: float | None = None
    cap: float = INF
    custom: CustomFamily | None = field(default=None, compare=False)

    def __post_init__(self):
        if not isinstance(self.family, Family):
            object.__setattr__(self, "family", Family(self.family))
        if self.family in (Family.LOG_THROUGHPUT, Family.INVERSE_POWER):
            if self.sigma2 is None or not self.sigma2 > 0 or not math.isfinite(self.sigma2):
                raise ValueError(f"{self.family.value} requires a finite sigma2 > 0")
            object.__setattr__(self, "sigma2", float(self.sigma2))
        elif self.family is Family.QUADRATIC:
            if self.sigma2 is not None:
                raise ValueError("quadratic family takes no sigma2")
        elif self.custom is None:
            raise ValueError("custom family requires a CustomFamily definition")
        object.__setattr__(self, "cap", float(self.cap))

    @classmethod
    def log_throughput(cls, sigma2, cap=INF):
        return cls(Family.LOG_THROUGHPUT, sigma2, cap)

    @classmethod
    def inverse_power(cls, sigma2, cap=INF):
        return cls(Family.INVERSE_POWER, sigma2, cap)

    @classmethod
    def quadratic(cls, cap=INF):
        return cls(Family.QUADRATIC, None, cap)

    @classmethod
    def from_custom(cls, custom: CustomFamily, cap=INF):
        return cls(Family.CUSTOM, None, cap, custom)

    # domain (a_m, b_m) and derivative range E_m, both open intervals

    @property
    def domain_lo(self) -> float:
        if self.family is Family.LOG_THROUGHPUT:
            return -self.sigma2
        if self.family is Family.CUSTOM:
            return self.custom.domain_lo
        return -INF

    @property
    def domain_hi(self) -> float:
        if self.family is Family.INVERSE_POWER:
            return 1.0
        if self.family is Family.CUSTOM:
            return self.custom.domain_hi
        return INF

    @property
    def range_lo(self) -> float:
        if self.family is Family.INVERSE_POWER:
            return 0.0
        if self.family is Family.CUSTOM:
            return self.custom.range_lo
        return -INF

    @property
    def range_hi(self) -> float:
        if self.family is Family.LOG_THROUGHPUT:
            return 0.0
        if self.family is Family.CUSTOM:
            return self.custom.range_hi
        return INF

    @property
    def beta(self) -> float:
        """Effective upper bound ``min(cap, b_m)``."""
        return min(self.cap, self.domain_hi)

    @property
    def cap_is_active(self) -> bool:
        """True when the cap lies strictly inside the domain and can be reached."""
        return self.cap < self.domain_hi

    def in_domain(self, x) -> bool:
        return self.domain_lo < x < self.domain_hi

    def in_range(self, theta) -> bool:
        return self.range_lo < theta < self.range_hi

    def g(self, x):
        """Objective term; accepts floats or numpy arrays (no domain check)."""
        fam = self.family
        if fam is Family.LOG_THROUGHPUT:
            return -np.log1p(x / self.sigma2)
        if fam is Family.INVERSE_POWER:
            return self.sigma2 / (1.0 - x)
        if fam is Family.QUADRATIC:
            return 0.5 * x * x
        return self.custom.g(x)

    def h(self, x):
        """Derivative of ``g``."""
        fam = self.family
        if fam is Family.LOG_THROUGHPUT:
            return -1.0 / (self.sigma2 + x)
        if fam is Family.INVERSE_POWER:
            d = 1.0 - x
            return self.sigma2 / (d * d)
        if fam is Family.QUADRATIC:
            return x
        return self.custom.h(x)

    def h_inv(self, theta):
        """Inverse of ``h`` on the derivative range."""
        fam = self.family
        if fam is Family.LOG_THROUGHPUT:
            return -1.0 / theta - self.sigma2
        if fam is Family.INVERSE_POWER:
            return 1.0 - (self.sigma2 / theta) ** 0.5
        if fam is Family.QUADRATIC:
            return theta
        return self.custom.h_inv(theta)

    def h_at(self, x) -> float:
        """``h`` extended to the closed domain: the range end at ``x >= b_m`` or ``x <= a_m``."""
        if x >= self.domain_hi:
            return self.range_hi
        if x <= self.domain_lo:
            return self.range_lo
        return self.h(x)

    def h_inv_at(self, theta) -> float:
        """``h_inv`` extended to the closed range: the domain end outside the open range."""
        if theta >= self.range_hi:
            return self.domain_hi
        if theta <= self.range_lo:
            return self.domain_lo
        return self.h_inv(theta)

    @property
    def slope_at_zero(self) -> float:
        return self.h(0.0)


@dataclass(frozen=True)
class ProblemInstance:
    """Constraint heights ``alpha`` (length K) and coordinate functions (length L)."""

    alpha: tuple[float, ...]
    functions: tuple[CoordinateFunction, ...]

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        object.__setattr__(self, "functions", tuple(self.functions))
        if len(self.functions) < 1:
            raise ValueError("need at least one coordinate function")
        if len(self.alpha) < len(self.functions):
            raise ValueError("alpha must have K >= L entries")

    @property
    def K(self) -> int:
        return len(self.alpha)

    @property
    def L(self) -> int:
        return len(self.functions)

    @property
    def beta(self) -> np.ndarray:
        return np.array([f.beta for f in self.functions])

    @property
    def total(self) -> float:
        """Right-hand side of the equality constraint."""
        return math.fsum(self.alpha)

    def prefix_alpha(self) -> np.ndarray:
        """``sum_{m<=l} alpha_m`` for ``l = 1..L-1``."""
        return np.cumsum(self.alpha[: self.L - 1])

    def with_alpha(self, alpha: Sequence[float]) -> ProblemInstance:
        return replace(self, alpha=tuple(alpha))


RULES = ("SLOPE_ORDER", "H10_RANGE", "CAPACITY", "TAIL_MASS", "ALPHA_SIGN", "CAP_RANGE")


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[tuple[str, str], ...] = ()

    @property
    def status(self) -> str:
        return "valid" if not self.violations else "invalid"

    @property
    def valid(self) -> bool:
        return not self.violations

    @property
    def rules(self) -> tuple[str, ...]:
        return tuple(rule for rule, _ in self.violations)


def validate_instance(inst: ProblemInstance) -> ValidationReport:
    """Check every modelling assumption; violations are returned, never raised.

    Existence of the intermediate roots is not checked here, the solver does
    that lazily.
    """
    out = []
    fs = inst.functions
    for m, a in enumerate(inst.alpha, 1):
        if not (math.isfinite(a) and a >= 0):
            out.append(("ALPHA_SIGN", f"alpha_{m} = {a} is not a finite nonnegative number"))
    for m, f in enumerate(fs, 1):
        if not (f.cap > 0 and (f.cap <= f.domain_hi or f.cap == INF)):
            out.append(("CAP_RANGE", f"cap_{m} = {f.cap} not in (0, {f.domain_hi}]"))

    slopes = [f.slope_at_zero for f in fs]
    for m in range(1, len(fs)):
        if not slopes[m - 1] <= slopes[m]:
            out.append((
                "SLOPE_ORDER",
                f"h_{m}(0) = {slopes[m - 1]:.12g} > h_{m + 1}(0) = {slopes[m]:.12g}",
            ))
    h10 = slopes[0]
    for m, f in enumerate(fs, 1):
        if not f.in_range(h10):
            out.append((
                "H10_RANGE",
                f"h_1(0) = {h10:.12g} outside the derivative range "
                f"({f.range_lo:.12g}, {f.range_hi:.12g}) of coordinate {m}",
            ))

    alpha_ok = not any(r == "ALPHA_SIGN" for r, _ in out)
    if alpha_ok:
        cap_sum = math.fsum(f.beta for f in fs)
        if inst.total > cap_sum:
            out.append(("CAPACITY", f"sum(alpha) = {inst.total:.12g} exceeds sum(beta) = {cap_sum:.12g}"))
        tail = math.fsum(inst.alpha[inst.L - 1:])
        if not tail > 0:
            out.append(("TAIL_MASS", f"sum of alpha_L..alpha_K = {tail:.12g} is not positive"))
    return ValidationReport(tuple(out))


def canonicalize_alpha(inst: ProblemInstance) -> ProblemInstance:
    """Fold ``alpha_L..alpha_K`` into one entry so that ``K == L``."""
    L = inst.L
    if inst.K == L:
        return inst
    tail = math.fsum(inst.alpha[L - 1:])
    return inst.with_alpha(inst.alpha[: L - 1] + (tail,))


def objective(inst: ProblemInstance, y) -> float:
    """Separable objective ``sum_m g_m(y_m)``."""
    y = np.asarray(y, dtype=float)
    if y.shape != (inst.L,):
        raise ValueError(f"expected a vector of length {inst.L}, got shape {y.shape}")
    terms = []
    for m, (f, x) in enumerate(zip(inst.functions, y), 1):
        if not f.in_domain(x):
            raise DomainError(f"y_{m} = {x} outside the domain ({f.domain_lo}, {f.domain_hi})")
        terms.append(float(f.g(float(x))))
    return math.fsum(terms)

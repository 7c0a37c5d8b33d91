"""Capped inverse slopes and least roots of their sums.

For a window of coordinates the map ``F(theta) = sum_m H_m(theta)`` with
``H_m = min(h_m^{-1}, beta_m)`` is continuous and non-decreasing, and strictly
increasing until every term saturates at its cap.  The solver needs the least
``theta >= h_1(0)`` with ``F(theta) = target`` for two kinds of targets: prefix
sums of ``alpha`` inside the window ("little" roots) and the suffix sum of
``alpha`` up to ``K`` ("big" roots).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import BracketError, RangeError
from .problem import CoordinateFunction, Family, INF
from .tolerances import DEFAULT_TOLERANCES, Tolerances

# bisection keeps going past tol_theta by this factor so that values derived
# from the root (H_m(theta), sums of them) stay well inside tol_feas
_REFINE = 2.0 ** -10


class QueryKind(enum.Enum):
    LITTLE = "little"
    BIG = "big"


@dataclass(frozen=True)
class ThetaQuery:
    """Root query over coordinates ``start..end`` (1-based, inclusive)."""

    start: int
    end: int
    target: float
    kind: QueryKind


@dataclass(frozen=True)
class ThetaResult:
    theta: float | None
    bracket: tuple[float, float]
    iterations: int

    @property
    def found(self) -> bool:
        return self.theta is not None


def capped_inverse(f: CoordinateFunction, theta: float) -> float:
    """``H_m(theta) = min(h_m^{-1}(theta), beta_m)``."""
    if not f.in_range(theta):
        raise RangeError(f"theta = {theta} outside ({f.range_lo}, {f.range_hi})")
    return min(f.h_inv(theta), f.cap)


def _capped_sum(functions, theta):
    total = 0.0
    for f in functions:
        x = f.h_inv(theta)
        total += x if x < f.cap else f.cap
    return total


def _supremum(functions):
    """Right end of the common derivative range, the limit of F there, and
    whether that limit is attained at a finite slope."""
    sup = min(f.range_hi for f in functions)
    limit = 0.0
    attained = True
    for f in functions:
        end = f.domain_hi if f.range_hi <= sup else f.h_inv(sup)
        if f.cap < end:
            limit += f.cap
        else:
            limit += end
            attained = False
    return sup, limit, attained


def least_theta(
    functions: Sequence[CoordinateFunction],
    target: float,
    h1_at_0: float,
    hint_hi: float | None = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> ThetaResult:
    """Least ``theta >= h1_at_0`` with ``sum_m H_m(theta) = target``.

    Bisects on the predicate ``F(theta) >= target`` and returns the left edge
    of the region where it holds, which is the least root even when ``F`` is
    flat across a plateau.  ``hint_hi`` is an upper bracket known from an
    earlier root; it is checked before use and discarded when it does not
    bracket.
    """
    lo = float(h1_at_0)
    if _capped_sum(functions, lo) >= target:
        return ThetaResult(lo, (lo, lo), 0)

    sup, limit, attained = _supremum(functions)
    if attained and limit < target <= limit + tol.tol_residual * max(1.0, abs(limit)):
        # rounding noise between two summation orders of the same caps
        target = limit
    if target > limit or (target == limit and not attained):
        return ThetaResult(None, (lo, sup), 0)

    iterations = 0
    hi = None
    f_hi = INF
    if hint_hi is not None and lo <= hint_hi < sup:
        f_hint = _capped_sum(functions, hint_hi)
        iterations += 1
        if f_hint >= target:
            hi, f_hi = float(hint_hi), f_hint

    if hi is None:
        step = 1.0
        for _ in range(tol.max_expansions):
            cand = lo + step
            if cand >= sup:
                cand = lo + 0.5 * (sup - lo)
                if cand <= lo:
                    break
            f_cand = _capped_sum(functions, cand)
            iterations += 1
            if f_cand >= target:
                hi, f_hi = cand, f_cand
                break
            if all(f.h_inv(cand) >= f.cap for f in functions):
                # every term saturated: F is flat below the target from here on
                return ThetaResult(None, (lo, cand), iterations)
            lo = cand
            step *= 2.0
        else:
            raise BracketError(
                f"no upper bracket for target {target!r} after {tol.max_expansions} expansions"
            )
        if hi is None:
            raise BracketError(f"no upper bracket for target {target!r} below {sup!r}")

    bracket = (lo, hi)
    width_goal = tol.tol_theta * _REFINE
    while hi - lo > width_goal or f_hi - target > tol.tol_residual:
        mid = lo + 0.5 * (hi - lo)
        if not lo < mid < hi:
            break
        f_mid = _capped_sum(functions, mid)
        iterations += 1
        if f_mid >= target:
            hi, f_hi = mid, f_mid
        else:
            lo = mid
    if f_hi - target > tol.tol_residual:
        raise BracketError(f"root for target {target!r} unresolved: residual {f_hi - target!r}")
    return ThetaResult(hi, bracket, iterations)


def analytic_theta(functions: Sequence[CoordinateFunction], query: ThetaQuery) -> float | None:
    """Closed-form root for single-family windows; ``None`` when there is none.

    Covers uncapped log-throughput and inverse-power windows and quadratic
    windows with arbitrary caps.  Used as an independent check on
    :func:`least_theta`.
    """
    fams = {f.family for f in functions}
    if len(fams) != 1:
        return None
    fam = fams.pop()
    count = len(functions)
    target = query.target

    if fam is Family.LOG_THROUGHPUT:
        if any(f.cap != INF for f in functions):
            return None
        return -count / (math.fsum(f.sigma2 for f in functions) + target)

    if fam is Family.INVERSE_POWER:
        if any(f.cap < f.domain_hi for f in functions):
            return None
        denom = count - target
        if denom <= 0:
            return None
        return (math.fsum(math.sqrt(f.sigma2) for f in functions) / denom) ** 2

    if fam is Family.QUADRATIC:
        caps = sorted(f.cap for f in functions)
        if target > math.fsum(caps):
            return None
        # a_k = F(beta_k): the first k terms saturate once target >= a_k
        k = 0
        saturated = 0.0
        while k < count and caps[k] < INF:
            a_next = (count - k - 1) * caps[k] + saturated + caps[k]
            if target < a_next:
                break
            saturated += caps[k]
            k += 1
        if k == count:
            return caps[-1]
        return (target - saturated) / (count - k)

    return None

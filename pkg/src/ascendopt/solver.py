"""Finite-step marginal-cost solver for ascending-constraint problems.

Each iteration works on the window ``i..j`` of coordinates still unset and
picks the largest of three candidate slopes:

* the big root ``Theta_i^j``, whose window sum meets the remaining total
  (case A: set the whole window and stop),
* ``h_j(0)``, the slope of the last coordinate at zero (case B: set
  ``y_j = 0`` and drop it),
* the little roots ``theta_i^l`` for ``l < j``, meeting the ascending
  constraint at ``l`` (case C: set ``i..t`` for the largest maximising ``t``).

All indices in traces are 1-based, as in the usual statement of the method.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ExistenceError, InternalSolverError, ValidationError
from .problem import ProblemInstance, objective, validate_instance
from .scalar import least_theta
from .tolerances import DEFAULT_TOLERANCES, Tolerances


class Case(enum.Enum):
    A = "A"
    B = "B"
    C = "C"


class Label(enum.Enum):
    A = "A"
    A_STAR = "A*"
    B_STAR = "B*"
    C = "C"
    C_STAR = "C*"

    @property
    def starred(self) -> bool:
        return self.value.endswith("*")


@dataclass(frozen=True)
class Selection:
    """Outcome of the slope maximisation for one window."""

    xi: float
    case: Case
    t: int | None
    big_theta: float
    slope_at_zero: float
    little_thetas: tuple[float, ...]


@dataclass(frozen=True)
class IterationRecord:
    n: int
    i: int
    j: int
    xi: float
    case: Case
    t: int | None
    assigned: tuple[tuple[int, float], ...]
    big_theta: float = math.nan
    slope_at_zero: float = math.nan
    little_thetas: tuple[float, ...] = ()


@dataclass(frozen=True)
class SolverTrace:
    records: tuple[IterationRecord, ...]
    p: tuple[int, ...]
    c: tuple[Label, ...]

    @property
    def N(self) -> int:
        return len(self.records)

    @property
    def xi(self) -> tuple[float, ...]:
        return tuple(r.xi for r in self.records)

    @property
    def cases(self) -> tuple[Case, ...]:
        return tuple(r.case for r in self.records)


@dataclass(frozen=True)
class Solution:
    y: np.ndarray
    objective_value: float
    trace: SolverTrace


@dataclass(frozen=True)
class SolverState:
    """Mutable-by-replacement state between iterations."""

    n: int
    i: int
    j: int
    y: tuple[float | None, ...]
    p: tuple[int | None, ...]
    c: tuple[Label | None, ...]
    big_hint: float | None = None
    little_hints: dict = field(default_factory=dict)

    @classmethod
    def initial(cls, L: int) -> SolverState:
        return cls(n=1, i=1, j=L, y=(None,) * L, p=(None,) * L, c=(None,) * L)

    @property
    def done(self) -> bool:
        return self.i > self.j


def _suffix_total(inst: ProblemInstance, i: int) -> float:
    return math.fsum(inst.alpha[i - 1:])


def select_xi(
    state: SolverState, inst: ProblemInstance, tol: Tolerances = DEFAULT_TOLERANCES
) -> Selection:
    """Compute the candidate slopes for window ``state.i..state.j`` and pick the case.

    Ties within ``tol_theta`` resolve A before B before C, and ``xi`` takes the
    value of the winning candidate.
    """
    i, j = state.i, state.j
    fs = inst.functions
    h10 = fs[0].slope_at_zero
    first = state.n == 1

    res = least_theta(fs[i - 1:j], _suffix_total(inst, i), h10, state.big_hint, tol)
    if not res.found:
        if first:
            raise ExistenceError("big")
        raise InternalSolverError(f"big root missing at iteration {state.n} (window {i}..{j})")
    big = res.theta

    littles = []
    for l in range(i, j):
        target = math.fsum(inst.alpha[i - 1:l])
        res = least_theta(fs[i - 1:l], target, h10, state.little_hints.get(l), tol)
        if not res.found:
            if first:
                raise ExistenceError(l)
            raise InternalSolverError(
                f"little root for l={l} missing at iteration {state.n} (window {i}..{j})"
            )
        littles.append(res.theta)

    slope0 = fs[j - 1].slope_at_zero
    xi = max([big, slope0, *littles])
    eps = tol.tol_theta
    if xi <= big + eps:
        return Selection(big, Case.A, None, big, slope0, tuple(littles))
    if xi <= slope0 + eps:
        return Selection(slope0, Case.B, None, big, slope0, tuple(littles))
    t = max(l for l, th in zip(range(i, j), littles) if th >= xi - eps)
    return Selection(littles[t - i], Case.C, t, big, slope0, tuple(littles))


def apply_case(
    state: SolverState, sel: Selection, inst: ProblemInstance
) -> tuple[SolverState, IterationRecord]:
    """Assign the variables fixed by ``sel`` and advance the window pointers."""
    i, j, n = state.i, state.j, state.n
    fs = inst.functions
    y, p, c = list(state.y), list(state.p), list(state.c)

    if sel.case is Case.B:
        members = [j]
        y[j - 1] = 0.0
        labels = {j: Label.B_STAR}
        nxt = (i, j - 1)
    else:
        last = j if sel.case is Case.A else sel.t
        members = list(range(i, last + 1))
        for m in members:
            f = fs[m - 1]
            y[m - 1] = min(f.h_inv(sel.xi), f.cap)
        plain, star = (Label.A, Label.A_STAR) if sel.case is Case.A else (Label.C, Label.C_STAR)
        labels = {m: plain for m in members}
        labels[last] = star
        nxt = (last + 1, j)

    for m in members:
        p[m - 1] = n
        c[m - 1] = labels[m]

    record = IterationRecord(
        n=n, i=i, j=j, xi=sel.xi, case=sel.case, t=sel.t,
        assigned=tuple((m, y[m - 1]) for m in members),
        big_theta=sel.big_theta, slope_at_zero=sel.slope_at_zero,
        little_thetas=sel.little_thetas,
    )
    # previous roots bound the next ones from above (same l, same or later start)
    hints = {l: th for l, th in zip(range(i, j), sel.little_thetas)}
    new_state = replace(
        state, n=n + 1, i=nxt[0], j=nxt[1], y=tuple(y), p=tuple(p), c=tuple(c),
        big_hint=sel.big_theta, little_hints=hints,
    )
    return new_state, record


def solve(inst: ProblemInstance, tol: Tolerances = DEFAULT_TOLERANCES) -> Solution:
    """Minimise the separable objective under the ascending constraints.

    Raises :class:`ValidationError` for instances breaking the modelling
    assumptions and :class:`ExistenceError` when a first-iteration root is
    missing.
    """
    report = validate_instance(inst)
    if not report.valid:
        raise ValidationError(report)

    state = SolverState.initial(inst.L)
    records = []
    while not state.done:
        if state.n > inst.L:
            raise InternalSolverError("more iterations than coordinates")
        sel = select_xi(state, inst, tol)
        state, rec = apply_case(state, sel, inst)
        records.append(rec)

    if records[-1].case is not Case.A:
        raise InternalSolverError("last iteration is not case A")
    y = np.array(state.y, dtype=float)
    trace = SolverTrace(tuple(records), tuple(state.p), tuple(state.c))
    return Solution(y, objective(inst, y), trace)


def check_trace(
    inst: ProblemInstance, sol: Solution, tol: Tolerances = DEFAULT_TOLERANCES
) -> list[str]:
    """Structural checks on a finished trace; returns human-readable violations."""
    out = []
    tr = sol.trace
    L = inst.L
    y = sol.y
    if tr.N > L:
        out.append(f"N = {tr.N} exceeds L = {L}")
    if tr.N == 0 or tr.records[-1].case is not Case.A:
        out.append("final iteration is not case A")
    xi = tr.xi
    for n in range(1, len(xi)):
        if xi[n - 1] < xi[n] - tol.tol_theta:
            out.append(f"xi increases at iteration {n + 1}: {xi[n - 1]!r} < {xi[n]!r}")
    seen = [m for r in tr.records for m, _ in r.assigned]
    if sorted(seen) != list(range(1, L + 1)):
        out.append(f"coordinates not assigned exactly once: {seen}")

    prefix_y = np.cumsum(y)
    prefix_a = np.cumsum(inst.alpha[:L])
    total = inst.total
    for m, lab in enumerate(tr.c, 1):
        if lab is Label.B_STAR and abs(y[m - 1]) > tol.tol_feas:
            out.append(f"B* at {m} but y = {y[m - 1]!r}")
        elif lab is Label.C_STAR and abs(prefix_y[m - 1] - prefix_a[m - 1]) > tol.tol_feas:
            out.append(f"C* at {m} but ascending constraint slack {prefix_y[m - 1] - prefix_a[m - 1]!r}")
        elif lab is Label.A_STAR and abs(prefix_y[m - 1] - total) > tol.tol_feas:
            out.append(f"A* at {m} but equality gap {prefix_y[m - 1] - total!r}")
    return out

"""Lagrange multipliers from a solver trace and numerical KKT / feasibility checks.

The Lagrangian relaxes ``-y_m <= 0`` (``lambda1``), ``y_m - beta_m <= 0``
(``lambda2``), the ascending constraints (``lambda3``) and the equality
constraint (``mu``).  Stationarity reads

    h_m(y_m) - lambda1_m + lambda2_m - sum_{l >= m} lambda3_l - mu = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import TraceError
from .problem import ProblemInstance
from .solver import Label, Solution
from .tolerances import DEFAULT_TOLERANCES, Tolerances

KKT_GROUPS = ("lower_slackness", "upper_slackness", "ascending_slackness", "positivity", "stationarity")


@dataclass(frozen=True)
class KktCertificate:
    lambda1: np.ndarray
    lambda2: np.ndarray
    lambda3: np.ndarray
    mu: float
    residuals: dict = field(default_factory=dict)


@dataclass(frozen=True)
class KktReport:
    residuals: dict
    tol: float

    @property
    def passed(self) -> bool:
        return all(v <= self.tol for v in self.residuals.values())

    @property
    def failed_groups(self) -> list[str]:
        return [k for k, v in self.residuals.items() if not v <= self.tol]


@dataclass(frozen=True)
class FeasibilityReport:
    lower_slack: np.ndarray
    upper_slack: np.ndarray
    ascending_slack: np.ndarray
    equality_gap: float
    tol: float

    @property
    def min_slack(self) -> float:
        parts = [self.lower_slack, self.upper_slack, self.ascending_slack]
        return float(min((p.min() for p in parts if p.size), default=math.inf))

    @property
    def passed(self) -> bool:
        return self.min_slack >= -self.tol and abs(self.equality_gap) <= self.tol

    @property
    def violations(self) -> list[str]:
        out = []
        for name, arr in (("lower", self.lower_slack), ("upper", self.upper_slack),
                          ("ascending", self.ascending_slack)):
            for k in np.flatnonzero(arr < -self.tol):
                out.append(f"{name}[{k + 1}] slack {arr[k]:.12g}")
        if abs(self.equality_gap) > self.tol:
            out.append(f"equality gap {self.equality_gap:.12g}")
        return out


def _next_starred_iteration(p, c, l):
    later = [p[m] for m in range(len(p)) if p[m] > p[l] and c[m] in (Label.C_STAR, Label.A_STAR)]
    if not later:
        raise TraceError(f"C* at coordinate {l + 1} has no later starred iteration")
    return min(later)


def compute_multipliers(inst: ProblemInstance, sol: Solution) -> KktCertificate:
    """Build the multiplier tuple from the labels and slopes recorded by the solver."""
    tr = sol.trace
    xi = tr.xi
    p = [n - 1 for n in tr.p]
    c = tr.c
    L = inst.L
    if len(p) != L or any(q < 0 or q >= tr.N for q in p):
        raise TraceError("iteration indices do not match the trace")
    xi_last = xi[-1]

    lam1 = np.zeros(L)
    lam2 = np.zeros(L)
    for m, f in enumerate(inst.functions):
        x = xi[p[m]]
        if c[m] is Label.B_STAR:
            lam1[m] = x - xi_last
        else:
            # xi - h(H(xi)) = xi - min(xi, h(beta)), nonzero only at a saturated cap
            lam2[m] = max(0.0, x - f.h_at(f.cap))

    lam3 = np.zeros(max(L - 1, 0))
    for l in range(L - 1):
        if c[l] is Label.C_STAR:
            lam3[l] = xi[p[l]] - xi[_next_starred_iteration(p, c, l)]

    cert = KktCertificate(lam1, lam2, lam3, float(xi_last))
    rep = check_kkt(inst, sol.y, cert)
    return KktCertificate(lam1, lam2, lam3, float(xi_last), rep.residuals)


def lambda3_telescoped(inst: ProblemInstance, sol: Solution) -> np.ndarray:
    """Ascending multipliers written as sums of consecutive slope drops."""
    tr = sol.trace
    xi = tr.xi
    p = [n - 1 for n in tr.p]
    c = tr.c
    out = np.zeros(max(inst.L - 1, 0))
    for l in range(inst.L - 1):
        if c[l] is Label.C_STAR:
            k = _next_starred_iteration(p, c, l)
            out[l] = sum(xi[n] - xi[n + 1] for n in range(p[l], k))
    return out


def check_kkt(inst: ProblemInstance, y, cert: KktCertificate, tol: Tolerances = DEFAULT_TOLERANCES) -> KktReport:
    """Evaluate complementary slackness, multiplier signs and stationarity.

    ``h_m(y_m)`` is recomputed from the function itself, so any ``(y, cert)``
    pair can be audited.
    """
    y = np.asarray(y, dtype=float)
    L = inst.L
    alpha = np.asarray(inst.alpha[:L], dtype=float)
    lam1 = np.asarray(cert.lambda1, dtype=float)
    lam2 = np.asarray(cert.lambda2, dtype=float)
    lam3 = np.asarray(cert.lambda3, dtype=float)
    beta = inst.beta

    lower = np.abs(lam1 * y)
    upper = np.array([
        0.0 if l2 == 0 else abs(l2 * (ym - b)) for l2, ym, b in zip(lam2, y, beta)
    ])
    gaps = np.cumsum(y)[: L - 1] - np.cumsum(alpha)[: L - 1]
    ascending = np.abs(lam3 * gaps)
    signs = np.concatenate([lam1, lam2, lam3])
    positivity = max(0.0, -float(signs.min())) if signs.size else 0.0

    # suffix sums: sum_{l >= m} lambda3_l, zero for m = L
    tail3 = np.concatenate([np.cumsum(lam3[::-1])[::-1], [0.0]])
    stat = np.array([
        f.h(ym) if f.in_domain(ym) else math.inf for f, ym in zip(inst.functions, y)
    ]) - lam1 + lam2 - tail3 - cert.mu

    def worst(a):
        return float(np.max(np.abs(a))) if a.size else 0.0

    residuals = {
        "lower_slackness": worst(lower),
        "upper_slackness": worst(upper),
        "ascending_slackness": worst(ascending),
        "positivity": positivity,
        "stationarity": worst(stat),
    }
    return KktReport(residuals, tol.tol_kkt)


def check_feasibility(inst: ProblemInstance, y, tol: Tolerances = DEFAULT_TOLERANCES) -> FeasibilityReport:
    """Slack of every primal constraint; negative slack is a violation."""
    y = np.asarray(y, dtype=float)
    L = inst.L
    if y.shape != (L,):
        raise ValueError(f"expected a vector of length {L}, got shape {y.shape}")
    beta = inst.beta
    lower = y.copy()
    upper = np.where(np.isinf(beta), math.inf, beta - y)
    ascending = np.cumsum(y)[: L - 1] - np.cumsum(np.asarray(inst.alpha[: L - 1], dtype=float))
    gap = math.fsum(y) - inst.total
    return FeasibilityReport(lower, upper, ascending, gap, tol.tol_feas)

"""Brute-force reference solver, the optimal-value function and the prefix-sum order."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyFeasible, ExistenceError, LengthMismatch
from .problem import ProblemInstance, canonicalize_alpha
from .solver import solve
from .tolerances import DEFAULT_TOLERANCES, Tolerances

# constraint slack allowed for grid points that sit on a face up to rounding
_GRID_SLACK = 1e-12
_CHUNK = 250_000


@dataclass(frozen=True)
class OracleConfig:
    grid_points_per_dim: int = 60
    refinement_rounds: int = 3
    shrink_factor: float = 0.2
    seed: int | None = None

    def __post_init__(self):
        if self.grid_points_per_dim < 3:
            raise ValueError("grid_points_per_dim must be >= 3")
        if self.refinement_rounds < 0:
            raise ValueError("refinement_rounds must be >= 0")
        if not 0 < self.shrink_factor < 1:
            raise ValueError("shrink_factor must lie in (0, 1)")

    def final_pitch(self, span: float) -> float:
        return span * self.shrink_factor ** self.refinement_rounds / self.grid_points_per_dim


@dataclass(frozen=True)
class OracleResult:
    y: np.ndarray
    objective: float
    pitch: float


def _axis(lo, hi, n, rng):
    pts = np.linspace(lo, hi, n)
    if rng is not None and n > 2 and hi > lo:
        jitter = rng.uniform(-0.5, 0.5, n - 2) * (hi - lo) / (n - 1)
        pts[1:-1] += jitter
    return pts


def _evaluate(inst, axes, ub, total, prefix_alpha):
    """Best feasible point on the tensor grid spanned by ``axes`` (first L-1 coordinates)."""
    L = inst.L
    fs = inst.functions
    best_val = math.inf
    best_y = None
    shape = tuple(len(a) for a in axes)
    size = int(np.prod(shape))
    for start in range(0, size, _CHUNK):
        idx = np.unravel_index(np.arange(start, min(size, start + _CHUNK)), shape)
        cols = [axes[d][idx[d]] for d in range(L - 1)]
        ys = np.column_stack(cols + [total - np.sum(cols, axis=0)])
        ok = (ys[:, -1] >= -_GRID_SLACK) & (ys[:, -1] <= ub[-1] + _GRID_SLACK)
        ok &= np.all(np.cumsum(ys[:, :-1], axis=1) >= prefix_alpha - _GRID_SLACK, axis=1)
        vals = np.zeros(len(ys))
        with np.errstate(all="ignore"):
            for m, f in enumerate(fs):
                x = ys[:, m]
                inside = (x > f.domain_lo) & (x < f.domain_hi)
                ok &= inside
                vals += np.where(inside, f.g(np.where(inside, x, 0.0)), math.inf)
        vals = np.where(ok, vals, math.inf)
        k = int(np.argmin(vals))
        if vals[k] < best_val:
            best_val = float(vals[k])
            best_y = ys[k].copy()
    return best_y, best_val


def oracle_solve(inst: ProblemInstance, cfg: OracleConfig = OracleConfig()) -> OracleResult:
    """Exhaustive grid search with local refinement around the incumbent.

    The last coordinate is eliminated through the equality constraint, so the
    grid lives on the first ``L - 1`` coordinates.  Intended for ``L <= 5``.
    """
    inst = canonicalize_alpha(inst)
    L = inst.L
    total = inst.total
    ub = np.minimum(inst.beta, total)
    prefix_alpha = np.cumsum(inst.alpha[: L - 1])
    rng = np.random.default_rng(cfg.seed) if cfg.seed is not None else None

    if L == 1:
        f = inst.functions[0]
        if not (total <= ub[0] and f.in_domain(total)):
            raise EmptyFeasible("the single feasible point violates the bounds")
        return OracleResult(np.array([total]), float(f.g(total)), 0.0)

    lo = np.zeros(L - 1)
    hi = ub[:-1].astype(float)
    span0 = float(np.max(hi - lo))
    n = cfg.grid_points_per_dim
    axes = [_axis(lo[d], hi[d], n, rng) for d in range(L - 1)]
    y, val = _evaluate(inst, axes, ub, total, prefix_alpha)
    if y is None:
        raise EmptyFeasible("no feasible grid point")

    half = (hi - lo) / 2.0
    for _ in range(cfg.refinement_rounds):
        half = half * cfg.shrink_factor
        axes = []
        for d in range(L - 1):
            a, b = max(0.0, y[d] - half[d]), min(ub[d], y[d] + half[d])
            # keep the incumbent on the grid so refinement never loses ground
            axes.append(np.union1d(np.linspace(a, b, n), [y[d]]))
        y2, val2 = _evaluate(inst, axes, ub, total, prefix_alpha)
        if y2 is not None and val2 <= val:
            y, val = y2, val2
    return OracleResult(y, val, cfg.final_pitch(span0))


def dominates(alpha, alpha_tilde, atol: float = 1e-12) -> bool:
    """``alpha`` dominates ``alpha_tilde``: every prefix sum is at least as large
    and the totals agree."""
    a = np.asarray(alpha, dtype=float)
    b = np.asarray(alpha_tilde, dtype=float)
    if a.shape != b.shape:
        raise LengthMismatch(f"lengths differ: {a.shape} vs {b.shape}")
    pa, pb = np.cumsum(a), np.cumsum(b)
    return bool(np.all(pa >= pb - atol) and abs(pa[-1] - pb[-1]) <= atol)


def value_function(
    alpha,
    base: ProblemInstance,
    use_oracle: bool = False,
    tol: Tolerances = DEFAULT_TOLERANCES,
    cfg: OracleConfig = OracleConfig(),
) -> float:
    """Optimal value as a function of the constraint heights (``K = L``).

    Returns ``+inf`` when the constraint set is empty.  Trailing zero heights
    force the matching coordinates to zero, so they are dropped before solving.
    """
    alpha = tuple(float(a) for a in alpha)
    if len(alpha) != base.L:
        raise LengthMismatch(f"need {base.L} heights, got {len(alpha)}")
    if any(a < 0 for a in alpha) or math.fsum(alpha) > math.fsum(base.beta):
        return math.inf

    k = base.L
    while k > 0 and alpha[k - 1] == 0:
        k -= 1
    fixed = math.fsum(float(f.g(0.0)) for f in base.functions[k:])
    if k == 0:
        return fixed
    sub = ProblemInstance(alpha[:k], base.functions[:k])
    try:
        if use_oracle:
            return oracle_solve(sub, cfg).objective + fixed
        return solve(sub, tol).objective_value + fixed
    except (ExistenceError, EmptyFeasible):
        # for the built-in families a missing root means a constraint cannot
        # be met inside the open domain
        return math.inf

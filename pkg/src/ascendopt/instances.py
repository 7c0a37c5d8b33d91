"""Random valid instances for property tests and the acceptance suite."""

from __future__ import annotations

import math

import numpy as np

from .problem import INF, CoordinateFunction, Family, ProblemInstance

FAMILIES = ("log_throughput", "inverse_power", "quadratic", "mixed")


def _scale_to_fit(alpha, limits, rng, strict):
    """Shrink ``alpha`` so every prefix sum (over the first L entries, the last
    one absorbing the tail) stays below the matching prefix of ``limits``."""
    L = len(limits)
    folded = np.concatenate([alpha[: L - 1], [alpha[L - 1:].sum()]])
    pa = np.cumsum(folded)
    pl = np.cumsum(limits)
    ratios = [pl[k] / pa[k] for k in range(L) if pa[k] > 0 and math.isfinite(pl[k])]
    if not ratios:
        return alpha
    r = min(ratios)
    top = 0.95 if strict else 1.0
    if r * top > 1 and rng.random() < 0.5:
        return alpha
    return alpha * r * rng.uniform(0.2, top)


def random_instance(
    rng: np.random.Generator,
    family: str,
    L: int,
    K: int | None = None,
    caps: bool | None = None,
    alpha_pattern: str = "random",
) -> ProblemInstance:
    """Draw a valid instance whose first-iteration roots all exist.

    ``alpha_pattern`` is ``"random"``, ``"last"`` (all mass on the last
    entry) or ``"descending"``.
    """
    K = L if K is None else K
    if caps is None:
        caps = bool(rng.random() < 0.5)

    if family in ("log_throughput", "inverse_power"):
        sig = np.sort(rng.uniform(0.1, 3.0, L))
        if family == "log_throughput":
            cap = np.sort(rng.uniform(0.3, 4.0, L))[::-1] if caps else np.full(L, INF)
            fs = [CoordinateFunction.log_throughput(s, c) for s, c in zip(sig, cap)]
        else:
            cap = rng.uniform(0.2, 0.99, L) if caps else np.full(L, INF)
            fs = [CoordinateFunction.inverse_power(s, c) for s, c in zip(sig, cap)]
    elif family == "quadratic":
        cap = rng.uniform(0.2, 3.0, L) if caps else np.full(L, INF)
        fs = [CoordinateFunction.quadratic(c) for c in cap]
    elif family == "mixed":
        k = int(rng.integers(1, L)) if L > 1 else 1
        sig = np.sort(rng.uniform(0.1, 3.0, k))
        fs = [CoordinateFunction.log_throughput(s) for s in sig]
        cap = rng.uniform(0.2, 3.0, L - k) if caps else np.full(L - k, INF)
        fs += [CoordinateFunction.quadratic(c) for c in cap]
    else:
        raise ValueError(f"unknown family {family!r}")

    if alpha_pattern == "last":
        alpha = np.zeros(K)
        alpha[K - 1] = rng.uniform(0.5, 5.0)
    elif alpha_pattern == "descending":
        alpha = np.sort(rng.uniform(0.0, 2.0, K))[::-1]
        alpha[L - 1:] = np.maximum(alpha[L - 1:], 0.05)
    elif alpha_pattern == "random":
        alpha = rng.exponential(1.0, K) * (rng.random(K) < 0.8)
        alpha[K - 1] = max(alpha[K - 1], rng.uniform(0.1, 1.0))
    else:
        raise ValueError(f"unknown alpha pattern {alpha_pattern!r}")

    limits = np.array([min(f.cap, f.domain_hi) for f in fs])
    alpha = _scale_to_fit(alpha, limits, rng, strict=True)
    return ProblemInstance(tuple(alpha), tuple(fs))


def dominating_pair(rng: np.random.Generator, alpha) -> np.ndarray:
    """A more lopsided vector: mass moved from later entries to earlier ones."""
    a = np.array(alpha, dtype=float)
    L = len(a)
    if L < 2:
        return a
    for _ in range(int(rng.integers(1, 2 * L + 1))):
        j = int(rng.integers(1, L))
        i = int(rng.integers(0, j))
        # keep the last entry positive so the tail-mass assumption survives
        room = a[j] * (0.9 if j == L - 1 else 1.0)
        amt = rng.uniform(0, room)
        a[i] += amt
        a[j] -= amt
    return a


__all__ = ["FAMILIES", "Family", "random_instance", "dominating_pair"]

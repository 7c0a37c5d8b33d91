"""Line-oriented ``key=value`` reports grouped by section, plus a table view."""

from __future__ import annotations

import math

from .kkt import FeasibilityReport, KktCertificate, KktReport
from .problem import ProblemInstance
from .solver import Solution


def fmt(x) -> str:
    """12 significant digits, ``inf`` for infinities, no negative zero."""
    if x is None:
        return "-"
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0"
    s = f"{x:.12g}"
    return "0" if s in ("-0", "0") else s


def fmt_vec(xs) -> str:
    return " ".join(fmt(x) for x in xs)


class Report:
    """Ordered sections of ``key=value`` lines."""

    def __init__(self):
        self.sections: list[tuple[str, list[str]]] = []

    def section(self, name: str) -> list[str]:
        lines: list[str] = []
        self.sections.append((name, lines))
        return lines

    def render(self) -> str:
        out = []
        for name, lines in self.sections:
            out.append(f"[{name}]")
            out.extend(lines)
        return "\n".join(out) + "\n"


def instance_section(rep: Report, inst: ProblemInstance):
    s = rep.section("INSTANCE")
    s.append(f"K={inst.K}")
    s.append(f"L={inst.L}")
    s.append(f"alpha={fmt_vec(inst.alpha)}")
    s.append("family=" + " ".join(f.family.value for f in inst.functions))
    s.append("sigma2=" + " ".join(fmt(f.sigma2) for f in inst.functions))
    s.append(f"cap={fmt_vec(f.cap for f in inst.functions)}")


def iteration_section(rep: Report, sol: Solution):
    s = rep.section("ITERATION")
    for r in sol.trace.records:
        s.append(
            f"n={r.n} i={r.i} j={r.j} xi={fmt(r.xi)} case={r.case.value} t={r.t if r.t is not None else '-'}"
        )


def candidates_section(rep: Report, sol: Solution):
    s = rep.section("CANDIDATES")
    for r in sol.trace.records:
        littles = " ".join(f"theta[{l}]={fmt(th)}" for l, th in zip(range(r.i, r.j), r.little_thetas))
        line = f"n={r.n} Theta[{r.i},{r.j}]={fmt(r.big_theta)} h{r.j}(0)={fmt(r.slope_at_zero)}"
        s.append(f"{line} {littles}".rstrip())
        s.append(f"n={r.n} assigned=" + " ".join(f"y{m}={fmt(v)}" for m, v in r.assigned))


def solution_section(rep: Report, sol: Solution):
    s = rep.section("SOLUTION")
    s.append(f"y={fmt_vec(sol.y)}")
    s.append(f"objective={fmt(sol.objective_value)}")
    s.append(f"N={sol.trace.N}")
    s.append(f"p={' '.join(str(v) for v in sol.trace.p)}")
    s.append(f"c={' '.join(c.value for c in sol.trace.c)}")


def kkt_section(rep: Report, cert: KktCertificate | None, kkt: KktReport):
    s = rep.section("KKT")
    if cert is not None:
        s.append(f"lambda1={fmt_vec(cert.lambda1)}")
        s.append(f"lambda2={fmt_vec(cert.lambda2)}")
        s.append(f"lambda3={fmt_vec(cert.lambda3)}")
        s.append(f"mu={fmt(cert.mu)}")
    for k, v in kkt.residuals.items():
        s.append(f"{k}={fmt(v)}")
    s.append(f"tol={fmt(kkt.tol)}")
    s.append(f"status={'PASS' if kkt.passed else 'FAIL'}")


def feasibility_section(rep: Report, feas: FeasibilityReport):
    s = rep.section("FEASIBILITY")
    s.append(f"lower_slack={fmt_vec(feas.lower_slack)}")
    s.append(f"upper_slack={fmt_vec(feas.upper_slack)}")
    s.append(f"ascending_slack={fmt_vec(feas.ascending_slack)}")
    s.append(f"equality_gap={fmt(feas.equality_gap)}")
    s.append(f"tol={fmt(feas.tol)}")
    for v in feas.violations:
        s.append(f"violation={v}")
    s.append(f"status={'PASS' if feas.passed else 'FAIL'}")


def error_section(rep: Report, kind: str, message: str, **extra):
    s = rep.section("ERROR")
    s.append(f"kind={kind}")
    for k, v in extra.items():
        s.append(f"{k}={v}")
    s.append(f"message={message}")


def render_table(rep: Report) -> str:
    """Human-readable rendering: each section as an aligned two-column table."""
    out = []
    for name, lines in rep.sections:
        out.append(name.title())
        out.append("-" * len(name))
        rows = []
        for line in lines:
            if line.startswith("n=") and " " in line:
                rows.append(("", "  ".join(line.split())))
            else:
                k, _, v = line.partition("=")
                rows.append((k, v))
        width = max((len(k) for k, _ in rows), default=0)
        for k, v in rows:
            out.append(f"  {k.ljust(width)}  {v}".rstrip() if k else f"  {v}")
        out.append("")
    return "\n".join(out)

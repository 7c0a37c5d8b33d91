"""Command-line front end.

Exit codes: 0 success, 2 invalid input (parse or validation failure),
3 a required root does not exist, 4 an optimality or feasibility audit failed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import report as R
from .documents import parse_instance, parse_solution, serialize_solution
from .errors import EmptyFeasible, ExistenceError, ParseError, ValidationError
from .kkt import check_feasibility, check_kkt, compute_multipliers
from .oracle import OracleConfig, oracle_solve
from .solver import solve
from .tolerances import Tolerances

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_EXISTENCE = 3
EXIT_AUDIT = 4

ORACLE_GAP = 1e-3


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tol-theta", type=float, default=Tolerances.tol_theta)
    p.add_argument("--tol-feas", type=float, default=Tolerances.tol_feas)
    p.add_argument("--tol-kkt", type=float, default=Tolerances.tol_kkt)
    p.add_argument("--format", choices=("report", "table"), default="report")
    p.add_argument("--seed", type=int, default=None, help="jitter seed for the oracle grid")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="ascendopt",
        description="Separable convex minimisation under ascending linear constraints.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="solve an instance and certify the result")
    p.add_argument("instance", type=Path)
    p.add_argument("--solution-out", type=Path, default=None,
                   help="write the solution with its trace as JSON")

    p = sub.add_parser("verify", parents=[common], help="audit a supplied solution")
    p.add_argument("instance", type=Path)
    p.add_argument("--solution", type=Path, required=True)

    p = sub.add_parser("oracle", parents=[common], help="brute-force grid search and gap to solve")
    p.add_argument("instance", type=Path)

    p = sub.add_parser("trace", parents=[common], help="solve and show every candidate slope")
    p.add_argument("instance", type=Path)
    return parser


def _emit(rep: R.Report, fmt: str, out):
    out.write(R.render_table(rep) if fmt == "table" else rep.render())


def _load_instance(path: Path, rep: R.Report):
    try:
        text = path.read_text()
    except OSError as exc:
        R.error_section(rep, "io", str(exc))
        return None
    try:
        return parse_instance(text)
    except ParseError as exc:
        R.error_section(rep, "parse", str(exc))
    except ValidationError as exc:
        R.error_section(rep, "validation", str(exc), rules=",".join(exc.report.rules))
    return None


def _solve(inst, tol, rep):
    try:
        return solve(inst, tol)
    except ExistenceError as exc:
        R.error_section(rep, "existence", str(exc), query=exc.query)
        return None


def _cmd_solve(args, tol, rep):
    inst = _load_instance(args.instance, rep)
    if inst is None:
        return EXIT_INVALID
    R.instance_section(rep, inst)
    sol = _solve(inst, tol, rep)
    if sol is None:
        return EXIT_EXISTENCE
    R.iteration_section(rep, sol)
    R.solution_section(rep, sol)
    cert = compute_multipliers(inst, sol)
    kkt = check_kkt(inst, sol.y, cert, tol)
    R.kkt_section(rep, cert, kkt)
    if args.solution_out is not None:
        args.solution_out.write_text(serialize_solution(sol))
    return EXIT_OK if kkt.passed else EXIT_AUDIT


def _cmd_trace(args, tol, rep):
    inst = _load_instance(args.instance, rep)
    if inst is None:
        return EXIT_INVALID
    R.instance_section(rep, inst)
    sol = _solve(inst, tol, rep)
    if sol is None:
        return EXIT_EXISTENCE
    R.iteration_section(rep, sol)
    R.candidates_section(rep, sol)
    R.solution_section(rep, sol)
    return EXIT_OK


def _cmd_verify(args, tol, rep):
    inst = _load_instance(args.instance, rep)
    if inst is None:
        return EXIT_INVALID
    R.instance_section(rep, inst)
    try:
        doc = parse_solution(args.solution.read_text(), inst.L)
    except OSError as exc:
        R.error_section(rep, "io", str(exc))
        return EXIT_INVALID
    except ParseError as exc:
        R.error_section(rep, "parse", str(exc))
        return EXIT_INVALID

    feas = check_feasibility(inst, doc.y, tol)
    R.feasibility_section(rep, feas)
    ok = feas.passed
    if doc.certificate is not None:
        cert = doc.certificate
    elif doc.trace is not None:
        cert = compute_multipliers(inst, doc.as_solution())
    else:
        cert = None
    if cert is not None:
        kkt = check_kkt(inst, doc.y, cert, tol)
        R.kkt_section(rep, cert, kkt)
        ok = ok and kkt.passed
    return EXIT_OK if ok else EXIT_AUDIT


def _cmd_oracle(args, tol, rep):
    inst = _load_instance(args.instance, rep)
    if inst is None:
        return EXIT_INVALID
    R.instance_section(rep, inst)
    try:
        res = oracle_solve(inst, OracleConfig(seed=args.seed))
    except EmptyFeasible as exc:
        R.error_section(rep, "empty_feasible", str(exc))
        return EXIT_AUDIT
    s = rep.section("ORACLE")
    s.append(f"y={R.fmt_vec(res.y)}")
    s.append(f"objective={R.fmt(res.objective)}")
    s.append(f"pitch={R.fmt(res.pitch)}")
    sol = _solve(inst, tol, rep)
    if sol is None:
        return EXIT_EXISTENCE
    gap = sol.objective_value - res.objective
    s = rep.section("COMPARISON")
    s.append(f"solver_objective={R.fmt(sol.objective_value)}")
    s.append(f"gap={R.fmt(gap)}")
    s.append(f"tol={R.fmt(ORACLE_GAP)}")
    s.append(f"status={'PASS' if gap <= ORACLE_GAP else 'FAIL'}")
    return EXIT_OK if gap <= ORACLE_GAP else EXIT_AUDIT


_COMMANDS = {"solve": _cmd_solve, "verify": _cmd_verify, "oracle": _cmd_oracle, "trace": _cmd_trace}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        tol = Tolerances(tol_theta=args.tol_theta, tol_feas=args.tol_feas, tol_kkt=args.tol_kkt)
    except ValueError as exc:
        rep = R.Report()
        R.error_section(rep, "usage", str(exc))
        _emit(rep, args.format, out)
        return EXIT_INVALID
    rep = R.Report()
    code = _COMMANDS[args.command](args, tol, rep)
    _emit(rep, args.format, out)
    return code


if __name__ == "__main__":
    sys.exit(main())

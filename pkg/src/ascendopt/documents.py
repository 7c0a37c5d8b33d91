"""JSON documents for instances and solutions.

Instance document::

    {"K": 2, "L": 2, "alpha": [0, 3],
     "functions": [{"family": "log_throughput", "sigma2": 1, "cap": "inf"},
                   {"family": "log_throughput", "sigma2": 2, "cap": "inf"}]}

Solution document: ``{"y": [...]}`` plus optionally ``"trace"`` (``xi``,
``p``, ``c``) from which multipliers are rebuilt, or ``"certificate"``
(``lambda1``, ``lambda2``, ``lambda3``, ``mu``) to be checked as given.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ValidationError
from .kkt import KktCertificate
from .problem import CoordinateFunction, Family, ProblemInstance, validate_instance
from .solver import Case, IterationRecord, Label, Solution, SolverTrace

_TOP_KEYS = {"K", "L", "alpha", "functions"}
_FAMILIES = {f.value: f for f in Family if f is not Family.CUSTOM}


def _number(value, where, allow_inf=False):
    if allow_inf and value == "inf":
        return math.inf
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _integer(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{where}: expected an integer, got {value!r}")
    return value


def _load(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _function(rec, k):
    where = f"functions[{k}]"
    if not isinstance(rec, dict):
        raise ParseError(f"{where}: expected an object")
    fam_name = rec.get("family")
    if fam_name not in _FAMILIES:
        raise ParseError(f"{where}.family: expected one of {sorted(_FAMILIES)}, got {fam_name!r}")
    fam = _FAMILIES[fam_name]
    allowed = {"family", "cap"} | ({"sigma2"} if fam is not Family.QUADRATIC else set())
    extra = set(rec) - allowed
    if extra:
        raise ParseError(f"{where}: unknown keys {sorted(extra)}")
    cap = _number(rec.get("cap", "inf"), f"{where}.cap", allow_inf=True)
    if fam is Family.QUADRATIC:
        return CoordinateFunction.quadratic(cap)
    if "sigma2" not in rec:
        raise ParseError(f"{where}.sigma2: required for family {fam_name}")
    sigma2 = _number(rec["sigma2"], f"{where}.sigma2")
    if not sigma2 > 0:
        raise ParseError(f"{where}.sigma2: must be positive, got {sigma2!r}")
    return CoordinateFunction(fam, sigma2, cap)


def parse_instance(text: str, validate: bool = True) -> ProblemInstance:
    """Parse an instance document; by default refuse instances that fail validation."""
    doc = _load(text)
    if not isinstance(doc, dict):
        raise ParseError("top level: expected an object")
    extra = set(doc) - _TOP_KEYS
    if extra:
        raise ParseError(f"top level: unknown keys {sorted(extra)}")
    missing = _TOP_KEYS - set(doc)
    if missing:
        raise ParseError(f"top level: missing keys {sorted(missing)}")
    K = _integer(doc["K"], "K")
    L = _integer(doc["L"], "L")
    if not 1 <= L <= K:
        raise ParseError(f"K, L: need 1 <= L <= K, got K={K}, L={L}")
    if not isinstance(doc["alpha"], list) or len(doc["alpha"]) != K:
        raise ParseError(f"alpha: expected a list of {K} numbers")
    alpha = tuple(_number(a, f"alpha[{k}]") for k, a in enumerate(doc["alpha"]))
    if not isinstance(doc["functions"], list) or len(doc["functions"]) != L:
        raise ParseError(f"functions: expected a list of {L} records")
    functions = tuple(_function(rec, k) for k, rec in enumerate(doc["functions"]))
    inst = ProblemInstance(alpha, functions)
    if validate:
        report = validate_instance(inst)
        if not report.valid:
            raise ValidationError(report)
    return inst


def _num_out(x):
    return "inf" if x == math.inf else x


def instance_to_dict(inst: ProblemInstance) -> dict:
    funcs = []
    for f in inst.functions:
        if f.family is Family.CUSTOM:
            raise ValueError("custom functions cannot be serialised")
        rec = {"family": f.family.value}
        if f.sigma2 is not None:
            rec["sigma2"] = f.sigma2
        rec["cap"] = _num_out(f.cap)
        funcs.append(rec)
    return {"K": inst.K, "L": inst.L, "alpha": list(inst.alpha), "functions": funcs}


def serialize_instance(inst: ProblemInstance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2) + "\n"


@dataclass(frozen=True)
class SolutionDocument:
    y: np.ndarray
    trace: SolverTrace | None = None
    certificate: KktCertificate | None = None

    def as_solution(self, objective_value=math.nan) -> Solution:
        return Solution(self.y, objective_value, self.trace)


def _trace_from_dict(d, L):
    try:
        xi = [_number(v, f"trace.xi[{k}]") for k, v in enumerate(d["xi"])]
        p = [_integer(v, f"trace.p[{k}]") for k, v in enumerate(d["p"])]
        c = [Label(v) for v in d["c"]]
    except KeyError as exc:
        raise ParseError(f"trace: missing key {exc}") from None
    except ValueError as exc:
        raise ParseError(f"trace.c: {exc}") from None
    if len(p) != L or len(c) != L:
        raise ParseError(f"trace: p and c need {L} entries")
    cases = d.get("cases")
    records = tuple(
        IterationRecord(n=n, i=0, j=0, xi=x, case=Case(cases[n - 1]) if cases else Case.A, t=None, assigned=())
        for n, x in enumerate(xi, 1)
    )
    return SolverTrace(records, tuple(p), tuple(c))


def parse_solution(text: str, L: int) -> SolutionDocument:
    doc = _load(text)
    if not isinstance(doc, dict) or "y" not in doc:
        raise ParseError("solution: expected an object with key 'y'")
    extra = set(doc) - {"y", "objective", "trace", "certificate"}
    if extra:
        raise ParseError(f"solution: unknown keys {sorted(extra)}")
    if not isinstance(doc["y"], list) or len(doc["y"]) != L:
        raise ParseError(f"y: expected a list of {L} numbers")
    y = np.array([_number(v, f"y[{k}]") for k, v in enumerate(doc["y"])])
    trace = _trace_from_dict(doc["trace"], L) if "trace" in doc else None
    cert = None
    if "certificate" in doc:
        cd = doc["certificate"]
        try:
            cert = KktCertificate(
                np.array([_number(v, "certificate.lambda1") for v in cd["lambda1"]]),
                np.array([_number(v, "certificate.lambda2") for v in cd["lambda2"]]),
                np.array([_number(v, "certificate.lambda3") for v in cd["lambda3"]]),
                _number(cd["mu"], "certificate.mu"),
            )
        except KeyError as exc:
            raise ParseError(f"certificate: missing key {exc}") from None
        if len(cert.lambda1) != L or len(cert.lambda2) != L or len(cert.lambda3) != L - 1:
            raise ParseError("certificate: multiplier lengths do not match L")
    return SolutionDocument(y, trace, cert)


def serialize_solution(sol: Solution) -> str:
    tr = sol.trace
    doc = {
        "y": [float(v) for v in sol.y],
        "objective": sol.objective_value,
        "trace": {
            "xi": list(tr.xi),
            "cases": [c.value for c in tr.cases],
            "p": list(tr.p),
            "c": [lab.value for lab in tr.c],
        },
    }
    return json.dumps(doc, indent=2) + "\n"

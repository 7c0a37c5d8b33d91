import numpy as np
import pytest

from conftest import MICRO
from ascendopt import (
    KktCertificate,
    ProblemInstance,
    TraceError,
    check_feasibility,
    check_kkt,
    compute_multipliers,
    solve,
)
from ascendopt import CoordinateFunction as F
from ascendopt.instances import FAMILIES, random_instance
from ascendopt.kkt import lambda3_telescoped
from ascendopt.solver import Label, Solution, SolverTrace


def certify(name):
    inst = MICRO[name]["inst"]
    sol = solve(inst)
    return inst, sol, compute_multipliers(inst, sol)


def test_multipliers_two_levels():
    _, _, cert = certify("two_levels")
    assert cert.lambda1 == pytest.approx([0, 0], abs=1e-12)
    assert cert.lambda2 == pytest.approx([0, 0], abs=1e-12)
    assert cert.lambda3 == pytest.approx([1 / 3], abs=1e-9)
    assert cert.mu == pytest.approx(-2 / 3, abs=1e-9)


def test_multipliers_rejection():
    _, _, cert = certify("reject")
    assert cert.lambda1 == pytest.approx([0, 0.3], abs=1e-9)
    assert cert.mu == pytest.approx(-0.5, abs=1e-9)


def test_multipliers_saturated_cap():
    _, _, cert = certify("quad_caps")
    assert cert.lambda2 == pytest.approx([0.5, 0, 0], abs=1e-9)
    assert cert.mu == pytest.approx(1.5, abs=1e-9)


def test_certificates_pass(micro):
    name, ex = micro
    inst, sol, cert = certify(name)
    rep = check_kkt(inst, sol.y, cert)
    assert rep.passed, rep.residuals
    assert set(cert.residuals) == set(rep.residuals)


def test_perturbed_solution_fails_stationarity():
    inst, sol, cert = certify("water_fill")
    y = sol.y + np.array([1e-2, -1e-2])
    rep = check_kkt(inst, y, cert)
    assert not rep.passed
    assert "stationarity" in rep.failed_groups
    # still feasible: only optimality is broken
    assert check_feasibility(inst, y).passed


def test_zero_ascending_multiplier_fails():
    inst, sol, cert = certify("two_levels")
    zeroed = KktCertificate(cert.lambda1, cert.lambda2, np.zeros_like(cert.lambda3), cert.mu)
    rep = check_kkt(inst, sol.y, zeroed)
    assert rep.failed_groups == ["stationarity"]


def test_trace_error_without_later_star():
    inst = MICRO["two_levels"]["inst"]
    sol = solve(inst)
    broken = SolverTrace(sol.trace.records, sol.trace.p, (Label.C_STAR, Label.C))
    with pytest.raises(TraceError):
        compute_multipliers(inst, Solution(sol.y, sol.objective_value, broken))


class TestFeasibility:
    inst = ProblemInstance((0, 3), (F.log_throughput(1), F.log_throughput(2)))

    def test_feasible(self):
        rep = check_feasibility(self.inst, [2, 1])
        assert rep.passed and rep.equality_gap == 0

    def test_equality_gap(self):
        rep = check_feasibility(self.inst, [0, 0])
        assert not rep.passed and rep.equality_gap == -3

    def test_positivity(self):
        rep = check_feasibility(self.inst, [-0.1, 3.1])
        assert not rep.passed
        assert rep.violations == ["lower[1] slack -0.1", "ascending[1] slack -0.1"]

    def test_ascending(self):
        inst = MICRO["two_levels"]["inst"]
        rep = check_feasibility(inst, [1.5, 1.0])
        assert rep.violations == ["ascending[1] slack -0.5"]


def test_random_certificates_and_slackness():
    rng = np.random.default_rng(31)
    for k in range(200):
        inst = random_instance(rng, FAMILIES[k % 4], int(rng.integers(1, 9)))
        sol = solve(inst)
        cert = compute_multipliers(inst, sol)
        assert check_kkt(inst, sol.y, cert).passed
        assert np.allclose(cert.lambda3, lambda3_telescoped(inst, sol), atol=1e-12, rtol=0)
        y = sol.y
        beta = inst.beta
        gaps = np.cumsum(y)[:-1] - np.cumsum(inst.alpha[: inst.L - 1])
        assert np.all(np.abs(y[cert.lambda1 != 0]) <= 1e-9)
        assert np.all(np.abs((y - beta)[cert.lambda2 != 0]) <= 1e-9)
        assert np.all(np.abs(gaps[cert.lambda3 != 0]) <= 1e-9)

import math

import pytest

from ascendopt import CoordinateFunction as F
from ascendopt import ProblemInstance

# Worked instances with hand-derived optima.
#   water_fill:  Theta = -2/6, y_m = -1/Theta - sigma2_m
#   reject:      h_2(0) = -1/5 beats Theta = -2/7; then Theta_1^1 = -1/2
#   two_levels:  theta_1^1 = -1/3 beats Theta = -4/9; then Theta_2^2 = -1/1.5
#   quad_caps:   Theta = (4 - 1) / 2 with the first coordinate saturated
#   inv_power:   Theta = ((1 + 1) / (2 - 1))^2 = 4, H = 1 - 1/2
MICRO = {
    "water_fill": dict(
        inst=ProblemInstance((0, 3), (F.log_throughput(1), F.log_throughput(2))),
        y=(2.0, 1.0), xi=(-1 / 3,), cases=("A",), labels=("A", "A*"),
    ),
    "reject": dict(
        inst=ProblemInstance((0, 1), (F.log_throughput(1), F.log_throughput(5))),
        y=(1.0, 0.0), xi=(-1 / 5, -1 / 2), cases=("B", "A"), labels=("A*", "B*"),
    ),
    "two_levels": dict(
        inst=ProblemInstance((2, 0.5), (F.log_throughput(1), F.log_throughput(1))),
        y=(2.0, 0.5), xi=(-1 / 3, -2 / 3), cases=("C", "A"), labels=("C*", "A*"),
    ),
    "quad_caps": dict(
        inst=ProblemInstance((0, 0, 4), (F.quadratic(1), F.quadratic(2), F.quadratic(3))),
        y=(1.0, 1.5, 1.5), xi=(1.5,), cases=("A",), labels=("A", "A", "A*"),
    ),
    "inv_power": dict(
        inst=ProblemInstance((0.5, 0.5), (F.inverse_power(1), F.inverse_power(1))),
        y=(0.5, 0.5), xi=(4.0,), cases=("A",), labels=("A", "A*"),
    ),
}


@pytest.fixture(params=sorted(MICRO))
def micro(request):
    return request.param, MICRO[request.param]


# acceptance criteria report one line each in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

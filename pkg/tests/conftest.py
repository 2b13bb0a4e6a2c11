import itertools
import sys

import pytest
from hypothesis import HealthCheck, settings

from sflattice import LatticePolytope

settings.register_profile(
    "default", deadline=None, max_examples=60, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def unit_simplex(n):
    pts = [(0,) * n] + [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return LatticePolytope(pts, name=f"unit simplex {n}")


def unit_cube(n):
    return LatticePolytope(list(itertools.product((0, 1), repeat=n)), name=f"unit cube {n}")


def reeve(r=2):
    return LatticePolytope([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, r)], name=f"reeve {r}")


@pytest.fixture
def T2():
    return unit_simplex(2)


@pytest.fixture
def square():
    return unit_cube(2)


@pytest.fixture
def reeve2():
    return reeve(2)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.format_line(k, *mod.RESULTS[k]))

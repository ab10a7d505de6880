import cmath
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from jacobi_cs.algebra import JacobiCSPoint, JacobiElement, su11_exp

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

unit = st.floats(0, 1, allow_nan=False)
angle = st.floats(-math.pi, math.pi, allow_nan=False)


@st.composite
def disk(draw, r=1.0):
    return r * math.sqrt(draw(unit)) * cmath.exp(1j * draw(angle))


@st.composite
def points(draw, zmax=1.0, wmax=0.5):
    return JacobiCSPoint(draw(disk(zmax)), draw(disk(wmax)))


@st.composite
def elements(draw, rmax=1.0, amax=1.0):
    g = su11_exp(draw(disk(rmax)), draw(angle))
    return JacobiElement(g, draw(disk(amax)), draw(angle))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """``report(n, title, ok, detail)`` prints and records one PASS/FAIL line."""

    def report(n, title, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {n:2d}: {title} | {detail}"
        _ACCEPTANCE[n] = line
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[n])

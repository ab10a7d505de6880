from fractions import Fraction

import pytest

from jacobi_cs.config import RunConfig, Tolerances
from jacobi_cs.errors import WeightError
from jacobi_cs.verify import SUITE_NAMES, run_verify


@pytest.fixture(scope="module")
def full_report():
    return run_verify(RunConfig(k=Fraction(3, 2), seed=3))


def test_all_suites_pass(full_report):
    assert full_report.passed, [c for c in full_report.checks if not c.passed]
    assert {c.suite for c in full_report.checks} == set(SUITE_NAMES)


def test_checks_have_finite_residuals(full_report):
    for c in full_report.checks:
        assert c.residual >= 0 and c.tol >= 0 and c.relation


def test_order_independent_of_workers():
    cfg = RunConfig(k=2, seed=11)
    a = run_verify(cfg, ("algebra", "coords"), workers=1)
    b = run_verify(cfg, ("coords", "algebra"), workers=4)
    assert a.to_json() == b.to_json()


def test_seed_changes_samples():
    a = run_verify(RunConfig(seed=1), ("algebra",))
    b = run_verify(RunConfig(seed=2), ("algebra",))
    assert [c.residual for c in a.checks] != [c.residual for c in b.checks]


def test_tight_tolerance_reports_failure():
    rep = run_verify(RunConfig(tol=Tolerances(kernel=1e-30)), ("kernel",))
    assert not rep.passed


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        run_verify(RunConfig(), ("numerology",))
    with pytest.raises(WeightError):
        run_verify(RunConfig(k=Fraction(1, 2)), ("algebra",))

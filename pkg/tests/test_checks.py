import pytest

from helpers import fg, grading, g2_sub, two_a
from thetaconn.checks import SUITES, run_suite


@pytest.mark.parametrize("maker", [lambda: fg("A2"), lambda: two_a(1), lambda: grading("A1", (1, 0))])
def test_all_suites_pass(maker):
    results = run_suite(maker(), "all", seed=0)
    failed = [r.name for r in results if not r.passed]
    assert not failed
    assert {r.name.split(".")[0] for r in results} <= set(SUITES)


def test_g2_loopalg_suite():
    results = run_suite(g2_sub(), "loopalg")
    assert results and all(r.passed for r in results)
    assert all(r.name.startswith("loopalg.") for r in results)


def test_triality_gradings_suite():
    g = grading("D4", (0, 1, 1), (2, 1, 3, 0))
    assert g.e == 3
    results = run_suite(g, "gradings")
    assert all(r.passed for r in results), [r.name for r in results if not r.passed]


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite(fg("A1"), "everything")


def test_result_serialization():
    r = run_suite(fg("A1"), "core")[0]
    d = r.to_dict()
    assert set(d) >= {"name", "passed", "detail"}

"""Acceptance criteria 1-9 at their stated scope and tolerance.

Each test prints one ``criterion N: PASS`` or ``criterion N: FAIL`` line;
the lines are repeated in the pytest terminal summary.  The full-grid
suites take a few minutes on one core.
"""

import pytest
from gmpy2 import mpq

from conftest import ACCEPTANCE_LINES
from qthreeterm.qcore import DEFAULT_POINT, rat
from qthreeterm.suites import run_suite
from qthreeterm.threeterm import grid

pytestmark = pytest.mark.slow

ORDER = 40
EPS = mpq(1, 10 ** 25)
GRID = 3
GRID_SIZE = 7 ** 4


def report(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    ACCEPTANCE_LINES.append(line)


def cases_of(result: dict, prefix: str) -> dict:
    return {k: v for k, v in result["cases"].items() if k.split("(")[0].split("[")[0] == prefix}


def summary(cases: dict) -> tuple[bool, str]:
    bad = [k for k, v in cases.items() if not v["pass"]]
    return bool(cases) and not bad, f"{len(cases) - len(bad)}/{len(cases)} cases" + (
        f", first failure {bad[0]}" if bad else "")


@pytest.fixture(scope="module")
def threeterm_suite():
    return run_suite("threeterm", DEFAULT_POINT, ORDER, EPS, GRID)


@pytest.fixture(scope="module")
def corollary_suite():
    return run_suite("corollary", DEFAULT_POINT, ORDER, EPS, GRID)


@pytest.fixture(scope="module")
def transforms_suite():
    return run_suite("transforms", DEFAULT_POINT, ORDER, EPS, GRID)


@pytest.fixture(scope="module")
def summations_suite():
    return run_suite("summations", DEFAULT_POINT, ORDER, EPS, GRID)


@pytest.fixture(scope="module")
def contiguity_suite():
    return run_suite("contiguity", DEFAULT_POINT, ORDER, EPS, GRID, contiguity_bound=1)


def test_grid_has_every_quad():
    assert len(list(grid(GRID))) == GRID_SIZE


def test_criterion_1_three_term_relation(threeterm_suite):
    cases = cases_of(threeterm_suite, "three_term")
    ok, detail = summary(cases)
    ok = ok and len(cases) == GRID_SIZE and all(v["order"] == ORDER for v in cases.values())
    report(1, ok, detail + f", residual zero through x^{ORDER}")
    assert ok


def test_criterion_2_two_paths_for_P(threeterm_suite):
    cases = cases_of(threeterm_suite, "P_equals_mu_Ptilde")
    ok, detail = summary(cases)
    ok = ok and len(cases) == GRID_SIZE
    report(2, ok, detail + ", exact")
    assert ok


def test_criterion_3_corollary(corollary_suite):
    cases = cases_of(corollary_suite, "corollary")
    ok, detail = summary(cases)
    ok = ok and len(cases) == GRID_SIZE
    report(3, ok, detail + ", cross-multiplied polynomials equal")
    assert ok


def test_criterion_4_anchors(threeterm_suite):
    cases = cases_of(threeterm_suite, "anchor")
    ok, detail = summary(cases)
    q1, r1 = cases["anchor(1,1,1,0)"]["Q"], cases["anchor(1,1,1,0)"]["R"]
    q0, r0 = cases["anchor(0,0,0,0)"]["Q"], cases["anchor(0,0,0,0)"]["R"]
    one = {"num": ["1/1"], "den": ["1/1"]}
    ok = ok and q1 == one and r1["num"] == [] and q0["num"] == [] and r0 == one
    report(4, ok, detail + ", (Q,R) = (1,0) and (0,1)")
    assert ok


def test_criterion_5_gasper_generalizations(transforms_suite):
    cases = {**cases_of(transforms_suite, "tf1"), **cases_of(transforms_suite, "tf2")}
    ok, detail = summary(cases)
    ok = ok and all(rat(v["tolerance"]) <= EPS and rat(v["margin"]) <= EPS for v in cases.values())
    r_values = {k.split("r=")[1].split(",")[0] for k in cases}
    ok = ok and r_values == {"1", "2"}
    report(5, ok, detail + ", certified within 1e-25")
    assert ok


def test_criterion_6_summations(summations_suite):
    cases = summations_suite["cases"]
    ok, detail = summary(cases)
    exact = {k: v for k, v in cases.items() if k.startswith(("terminating_", "sf15"))}
    ok = ok and bool(exact) and all(
        v["margin"] == "0/1" and v["lhs"]["error_bound"] == "0/1" for v in exact.values())
    rest = [v for k, v in cases.items() if k not in exact]
    ok = ok and all(rat(v["margin"]) <= EPS for v in rest)
    report(6, ok, detail + f", {len(exact)} terminating cases exactly equal")
    assert ok


def test_criterion_7_contiguity(contiguity_suite):
    cases = contiguity_suite["cases"]
    ok, detail = summary(cases)
    ops = [k for k in cases if k.startswith("contiguity_")]
    operators_on_y12 = [k for k in ops if k.endswith(("_y1", "_y2"))]
    ok = ok and len(operators_on_y12) == 16
    ok = ok and all(f"Delta_y{i}" in cases for i in range(1, 5))
    cas = [cases["casoratian_12"], cases["casoratian_34"]]
    ok = ok and all(c["series_ok"] and c["scalar_ok"] for c in cas)
    for prefix in ("theta_relation_y1", "theta_relation_y3", "Y_ratios"):
        ok = ok and bool(cases_of(contiguity_suite, prefix))
    report(7, ok, detail + f", order {ORDER}")
    assert ok


def test_criterion_8_degree_and_leading_coefficient(threeterm_suite):
    cases = cases_of(threeterm_suite, "leading_coefficient")
    ok, detail = summary(cases)
    with_degree = [v for v in cases.values() if v["d"] >= 0]
    ok = ok and len(cases) == GRID_SIZE and bool(with_degree)
    report(8, ok, detail + f", {len(with_degree)} with d >= 0")
    assert ok


def test_criterion_9_vanishing_thresholds(threeterm_suite):
    cases = cases_of(threeterm_suite, "lemma_vanishing")
    ok, detail = summary(cases)
    ok = ok and len(cases) == GRID_SIZE
    report(9, ok, detail + ", through threshold + 15")
    assert ok

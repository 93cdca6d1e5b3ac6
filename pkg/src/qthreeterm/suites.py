"""Verification suites: run the module checks over a grid and collect JSON-ready cases.

Every suite returns a dict mapping a case key (identity id plus its
parameters) to a JSON-serializable result with a boolean ``"pass"``.
Cases are produced in a fixed order and merged by sorted key, so a report
depends only on its inputs.
"""

from __future__ import annotations

from typing import Iterable

from gmpy2 import mpq

from . import contiguity as ct
from . import threeterm as tt
from . import transforms as tf
from .qcore import BoundedValue, GenericPoint, rat_str
from .threeterm import ShiftQuad

SUITES = ("threeterm", "corollary", "transforms", "summations", "contiguity")

#: quads checked by the contiguity suite in addition to its small grid
NAMED_QUADS = ((1, 1, 1, 0), (0, 0, 0, 0), (2, -1, 1, -2), (1, 1, 1, 1), (2, 3, 1, -1),
               (0, 2, -1, 1), (3, 1, 2, -1))


def jsonable(value):
    """Convert rationals, bounded values, tuples and nested containers for json.dumps."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, type(mpq())):
        return rat_str(value)
    if isinstance(value, BoundedValue):
        return {"value": rat_str(value.value), "error_bound": rat_str(value.error_bound)}
    return value


def _case(result: dict) -> tuple[str, dict]:
    out = {k: v for k, v in result.items() if k != "passed"}
    out["pass"] = bool(result["passed"])
    key = result["identity_id"]
    if "quad" in result:
        key += "(" + ",".join(str(v) for v in result["quad"]) + ")"
    if "kind" in result and f"y{result['kind']}" not in key:
        key += f"[y{result['kind']}]"
    return key, jsonable(out)


def _collect(results: Iterable[dict]) -> dict:
    cases = {}
    for r in results:
        key, value = _case(r)
        if key in cases:
            raise RuntimeError(f"duplicate case key {key}")
        cases[key] = value
    return dict(sorted(cases.items()))


def anchor_cases(point: GenericPoint) -> list[dict]:
    """(Q, R) at the identity shifts (1,1,1,0) and (0,0,0,0)."""
    out = []
    for quad, (q_exp, r_exp) in (((1, 1, 1, 0), (1, 0)), ((0, 0, 0, 0), (0, 1))):
        sq = ShiftQuad(*quad)
        Q, R = tt.compute_Q(sq, point), tt.compute_R(sq, point)
        ok = Q.equals(q_exp) and R.equals(r_exp)
        out.append({"identity_id": "anchor", "quad": list(quad), "passed": ok,
                    "Q": Q.to_json(), "R": R.to_json()})
    return out


def _keyed(result: dict, quad: ShiftQuad) -> dict:
    """Key a result by the grid quad; checks that canonicalize keep theirs as ``canonical_quad``."""
    reported = result.get("quad")
    if reported is not None and tuple(reported) != quad.as_tuple():
        result["canonical_quad"] = reported
    result["quad"] = list(quad.as_tuple())
    return result


def threeterm_results(point: GenericPoint, order: int, bound: int) -> Iterable[dict]:
    for quad in tt.grid(bound):
        yield tt.verify_three_term(quad, point, order)
        yield _keyed(tt.verify_P_equals_mu_Ptilde(quad, point), quad)
        canon, cpoint, _ = quad.canonical(point)
        lc = tt.check_leading_coefficient(canon, cpoint)
        lc["identity_id"] = "leading_coefficient"
        yield _keyed(lc, quad)
        yield _keyed(tt.lemma_vanishing(quad, point), quad)
    yield from anchor_cases(point)


def corollary_results(point: GenericPoint, order: int, bound: int) -> Iterable[dict]:
    for quad in tt.grid(bound):
        yield tt.verify_corollary(quad, point, order)


def contiguity_results(point: GenericPoint, order: int, bound: int,
                       named: Iterable = NAMED_QUADS) -> Iterable[dict]:
    for kind in ct.KINDS:
        yield ct.verify_L(kind, point, order)
        yield ct.verify_Delta(kind, point, order)
        for op in ct.OPERATORS:
            yield ct.verify_operator_lemma(op, kind, point, order)
        for j in range(1, 5):
            yield ct.verify_inverse_pair(j, kind, point, order)
    for pair in ((1, 2), (3, 4)):
        yield ct.casoratian(pair, point, order)
    quads = list(dict.fromkeys([q.as_tuple() for q in tt.grid(bound)] + [tuple(q) for q in named]))
    for quad in quads:
        sq = ShiftQuad(*quad)
        for kind in ct.KINDS:
            yield ct.verify_theta_relation(sq, kind, point, order)
        yield ct.verify_Y_ratios(sq, point, order)
        yield _keyed(ct.verify_Y_P_link(sq, point, order), sq)
    for quad in named:
        for kind in ct.KINDS:
            yield ct.verify_theta_order(ShiftQuad(*quad), kind, point)


def _reports(reports: Iterable[tf.VerificationReport]) -> dict:
    cases = {}
    for rep in reports:
        cases[rep.identity_id] = rep.to_json()
    return dict(sorted(cases.items()))


def run_suite(name: str, point: GenericPoint, order: int, eps: mpq, grid_bound: int,
              contiguity_bound: int = 1) -> dict:
    """Run one suite and return {"pass", "count", "failures", "cases"}."""
    if name == "threeterm":
        cases = _collect(threeterm_results(point, order, grid_bound))
    elif name == "corollary":
        cases = _collect(corollary_results(point, order, grid_bound))
    elif name == "contiguity":
        cases = _collect(contiguity_results(point, order, contiguity_bound))
    elif name == "transforms":
        cases = _reports(tf.transform_suite(eps))
    elif name == "summations":
        cases = _reports(tf.summation_suite(eps))
    else:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES} or 'all'")
    failures = [k for k, v in cases.items() if not v["pass"]]
    return {"pass": not failures, "count": len(cases), "failures": failures, "cases": cases}

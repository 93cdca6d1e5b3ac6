"""Certified checks of the generalized Gasper transformations and their relatives.

Each identity is first turned into two *sides*: tuples of ``Term`` objects,
where a term is an exact rational coefficient times a ratio of infinite
q-shifted factorials times (optionally) one basic hypergeometric series.
Sides are plain data, so two displays that specialize to the same instance
can be compared structurally.  Evaluation turns a side into a
``BoundedValue`` whose error is certified, and ``make_report`` compares the
two sides.

A report passes when ``|lhs - rhs| + lhs.error + rhs.error <= tolerance``,
i.e. when the true difference of the two sides is certified to be at most
the tolerance.  Terminating identities are summed exactly and pass with
margin 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from gmpy2 import mpq

from .qcore import (
    BoundedValue,
    NonGenericError,
    as_bounded,
    qpoch,
    qpoch_ratio_inf,
    qpow,
    rat,
    rat_str,
    rqpoch,
)
from .series import (
    DEFAULT_EPS,
    MultiPhiDSpec,
    PhiSpec,
    hyper_sum,
    phi_D,
    phi_D_tilde,
    phi_value,
)


class ConvergenceError(ValueError):
    """An instance violates the convergence condition of its display."""


# ---------------------------------------------------------------------------
# fixed sample points

SAMPLE_Q = mpq(1, 3)
SAMPLE_B = mpq(1, 5)
SAMPLE_C = (mpq(1, 7), mpq(4, 11))
SAMPLE_A_BASE = mpq(5, 2)

ANDREWS_SAMPLE = {
    "q": mpq(1, 3),
    "a": mpq(2, 7),
    "b_list": (mpq(3, 5), mpq(5, 11)),
    "c": mpq(4, 13),
    "x_list": (mpq(1, 4), mpq(2, 9)),
}

REVERSAL_SAMPLE = {
    "q": mpq(1, 3),
    "a": mpq(3, 5),
    "b": mpq(2, 7),
    "x": mpq(1, 4),
    "x_list": (mpq(5, 9), mpq(7, 3)),
}

VANISHING_SAMPLE = {
    "q": mpq(1, 3),
    "a": mpq(5, 7),
    "b_list": (mpq(2, 5), mpq(7, 11)),
    "c": mpq(3, 13),
    "x": mpq(4, 5),
    "x_list": (mpq(3, 2), mpq(2, 9)),
}


def sample_config() -> dict:
    """The fixed sample points, serialized for reports and ``--print-config``."""

    def ser(v):
        if isinstance(v, tuple):
            return [rat_str(t) for t in v]
        return rat_str(v)

    return {
        "gasper": {"q": ser(SAMPLE_Q), "b": ser(SAMPLE_B), "c_list": ser(SAMPLE_C),
                   "a_base": ser(SAMPLE_A_BASE)},
        "andrews": {k: ser(v) for k, v in ANDREWS_SAMPLE.items()},
        "reversal": {k: ser(v) for k, v in REVERSAL_SAMPLE.items()},
        "vanishing_sum": {k: ser(v) for k, v in VANISHING_SAMPLE.items()},
    }


# ---------------------------------------------------------------------------
# instances


@dataclass(frozen=True)
class TransformInstance:
    """Integer data (r, m, s, n_1..n_r) plus rational parameters a, b, c_1..c_r, q."""

    m: int
    s: int
    n_list: tuple
    c_list: tuple
    a: mpq
    b: mpq
    q: mpq

    def __post_init__(self):
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        object.__setattr__(self, "c_list", tuple(rat(c) for c in self.c_list))
        for name in ("a", "b", "q"):
            object.__setattr__(self, name, rat(getattr(self, name)))
        if len(self.n_list) != len(self.c_list):
            raise ValueError("n_list and c_list must have the same length")
        if self.s < 0 or any(n < 0 for n in self.n_list):
            raise ValueError("s and every n must be non-negative")
        if not 0 < abs(self.q) < 1:
            raise ValueError("0 < |q| < 1 is required")

    @property
    def r(self) -> int:
        return len(self.n_list)

    @property
    def n_total(self) -> int:
        return sum(self.n_list)

    def tf1_exponent(self) -> int:
        return self.m + 1 - self.n_total - self.s

    def tf2_exponent(self) -> int:
        return self.m + 1 - self.n_total + self.s + min(self.r - 2, 0) * self.s

    def check_tf1(self):
        z = qpow(self.q, self.tf1_exponent()) / self.a
        if not abs(z) < 1:
            raise ConvergenceError(f"|a^-1 q^{self.tf1_exponent()}| = {float(abs(z)):.6g} is not < 1")

    def check_tf2(self):
        if self.r and min(self.n_list) < self.s:
            raise ConvergenceError("every n must be at least s")
        z = qpow(self.q, self.tf2_exponent()) / self.a
        if not abs(z) < 1:
            raise ConvergenceError(f"|a^-1 q^{self.tf2_exponent()}| = {float(abs(z)):.6g} is not < 1")

    def label(self) -> str:
        n = ",".join(str(v) for v in self.n_list)
        return f"r={self.r},m={self.m},s={self.s},n=({n})"

    @classmethod
    def sample(cls, m: int, s: int, n_list: Sequence[int], variant: str = "tf1") -> "TransformInstance":
        """Instance at the fixed sample point, with a scaled so the argument is at most 2/5."""
        n_list = tuple(n_list)
        c_list = SAMPLE_C[: len(n_list)]
        if len(n_list) > len(SAMPLE_C):
            raise ValueError("sample points cover r <= 2")
        probe = cls(m, s, n_list, c_list, SAMPLE_A_BASE, SAMPLE_B, SAMPLE_Q)
        e = probe.tf1_exponent() if variant == "tf1" else probe.tf2_exponent()
        a = SAMPLE_A_BASE * qpow(SAMPLE_Q, min(e, 0))
        return cls(m, s, n_list, c_list, a, SAMPLE_B, SAMPLE_Q)


# ---------------------------------------------------------------------------
# sides and their evaluation


@dataclass(frozen=True)
class Term:
    """coeff * prod (z)_inf over inf_num / prod (z)_inf over inf_den * series."""

    coeff: mpq
    inf_num: tuple = ()
    inf_den: tuple = ()
    series: PhiSpec | None = None

    def __post_init__(self):
        object.__setattr__(self, "coeff", rat(self.coeff))
        object.__setattr__(self, "inf_num", tuple(rat(z) for z in self.inf_num))
        object.__setattr__(self, "inf_den", tuple(rat(z) for z in self.inf_den))


def _certify(compute: Callable[[mpq], BoundedValue], target: mpq) -> BoundedValue:
    """Call ``compute(inner_eps)`` with shrinking inner_eps until the error is <= target."""
    inner = target / 4
    v = compute(inner)
    for _ in range(12):
        if v.error_bound <= target:
            return v
        ratio = v.error_bound / target
        inner = inner / (64 * (int(ratio) + 1))
        v = compute(inner)
    return v


def term_value(term: Term, q, eps=DEFAULT_EPS) -> BoundedValue:
    """Certified value of one term; a zero coefficient gives an exact 0 without summing."""
    q, eps = rat(q), rat(eps)
    if term.coeff == 0:
        return BoundedValue.exact(0)

    def compute(inner):
        if term.inf_num or term.inf_den:
            pre = qpoch_ratio_inf(term.inf_num, term.inf_den, q, inner) * term.coeff
        else:
            pre = BoundedValue.exact(term.coeff)
        if term.series is None:
            return pre
        s = phi_value(term.series, inner / (pre.magnitude + 1))
        return pre * s

    return _certify(compute, eps)


def side_value(side: Sequence[Term], q, eps=DEFAULT_EPS) -> BoundedValue:
    share = rat(eps) / max(len(side), 1)
    total = BoundedValue.exact(0)
    for t in side:
        total = total + term_value(t, q, share)
    return total


@dataclass(frozen=True)
class VerificationReport:
    identity_id: str
    lhs: BoundedValue
    rhs: BoundedValue
    passed: bool
    margin: mpq
    tolerance: mpq = field(default_factory=lambda: DEFAULT_EPS)

    def to_json(self) -> dict:
        def bv(v: BoundedValue):
            return {"value": rat_str(v.value), "error_bound": rat_str(v.error_bound)}

        return {
            "identity_id": self.identity_id,
            "lhs": bv(self.lhs),
            "rhs": bv(self.rhs),
            "pass": self.passed,
            "margin": rat_str(self.margin),
            "tolerance": rat_str(self.tolerance),
        }


def make_report(identity_id: str, lhs, rhs, tolerance=DEFAULT_EPS) -> VerificationReport:
    lhs, rhs = as_bounded(lhs), as_bounded(rhs)
    tolerance = rat(tolerance)
    margin = abs(lhs.value - rhs.value) + lhs.error_bound + rhs.error_bound
    return VerificationReport(identity_id, lhs, rhs, margin <= tolerance, margin, tolerance)


def compare_sides(identity_id: str, lhs: Sequence[Term], rhs: Sequence[Term], q,
                  eps=DEFAULT_EPS) -> VerificationReport:
    eps = rat(eps)
    return make_report(identity_id, side_value(lhs, q, eps / 8), side_value(rhs, q, eps / 8), eps)


def _prod(values: Iterable) -> mpq:
    out = mpq(1)
    for v in values:
        out *= v
    return out


# ---------------------------------------------------------------------------
# the transformations


def gasper_original_sides(inst: TransformInstance) -> tuple[tuple, tuple]:
    """Gasper's transformation (m >= 0, no s parameter), built from its own display."""
    if inst.s != 0 or inst.m < 0:
        raise ValueError("Gasper's original transformation needs m >= 0 and s = 0")
    q, a, b, m = inst.q, inst.a, inst.b, inst.m
    ns, cs, N = inst.n_list, inst.c_list, inst.n_total
    lhs = Term(1, series=PhiSpec(
        (a, b) + tuple(c * qpow(q, n) for c, n in zip(cs, ns)),
        (b * qpow(q, m + 1),) + cs,
        q, qpow(q, m + 1 - N) / a))
    coeff = (qpoch(b * q, m, q) / qpoch(q, m, q)
             * _prod(qpoch(c / b, n, q) / qpoch(c, n, q) for c, n in zip(cs, ns))
             * b ** (N - m))
    rhs = Term(coeff, (q, b * q / a), (q / a, b * q), PhiSpec(
        (qpow(q, -m), b) + tuple(b * q / c for c in cs),
        (b * q / a,) + tuple(b * qpow(q, 1 - n) / c for c, n in zip(cs, ns)),
        q, q))
    return (lhs,), (rhs,)


def tf1_sides(inst: TransformInstance) -> tuple[tuple, tuple]:
    """Both sides of the first generalized transformation (any integer m, s >= 0)."""
    inst.check_tf1()
    q, a, b, m, s = inst.q, inst.a, inst.b, inst.m, inst.s
    ns, cs, N = inst.n_list, inst.c_list, inst.n_total
    lhs = Term(1, series=PhiSpec(
        (a, b) + tuple(c * qpow(q, n) for c, n in zip(cs, ns)),
        (b * qpow(q, m + 1),) + cs,
        q, qpow(q, m + 1 - N - s) / a))
    # 1/(q)_m vanishes for m < 0, which makes the right side exactly zero
    coeff = (qpoch(b * q, m, q) * rqpoch(q, m, q)
             * _prod(qpoch(c / b, n, q) * rqpoch(c, n, q) for c, n in zip(cs, ns))
             * b ** (N - m + s))
    rhs = Term(coeff, (q, b * q / a), (q / a, b * q), PhiSpec(
        (qpow(q, -m), b) + tuple(b * q / c for c in cs),
        (b * q / a,) + tuple(b * qpow(q, 1 - n) / c for c, n in zip(cs, ns)),
        q, qpow(q, 1 + s)))
    return (lhs,), (rhs,)


def _weight(s: int, i: int, q: mpq, power: int) -> mpq:
    """(q^{-s})_i / (q)_i * q^{power * i}."""
    return qpoch(qpow(q, -s), i, q) * rqpoch(q, i, q) * qpow(q, power * i)


def tf2_lhs_terms(inst: TransformInstance, bottom_shift: int | None = None,
                  finite_den: Callable[[int], mpq] | None = None,
                  with_q_inf: bool = True) -> tuple:
    """The s+1 terms of the finite combination on the left of the second transformation.

    ``bottom_shift`` overrides the exponent in the bq^{m+1} lower parameter and
    ``finite_den`` the finite factor in the denominator; the summation
    formulas reuse this shape with their own displayed factors.
    """
    q, a, b, m, s, r = inst.q, inst.a, inst.b, inst.m, inst.s, inst.r
    ns, cs, N = inst.n_list, inst.c_list, inst.n_total
    shift = m + 1 if bottom_shift is None else bottom_shift
    terms = []
    for i in range(s + 1):
        den = rqpoch(qpow(q, -m) / b, m - i + 1, q) if finite_den is None else finite_den(i)
        coeff = (_weight(s, i, q, s)
                 * _prod(qpoch(qpow(q, 1 - n) / c, n - i, q) for c, n in zip(cs, ns))
                 * den)
        series = PhiSpec(
            (a * qpow(q, i), b * qpow(q, i)) + tuple(c * qpow(q, n) for c, n in zip(cs, ns)),
            (b * qpow(q, shift),) + tuple(c * qpow(q, i) for c in cs),
            q, qpow(q, m + 1 - N + s + (r - 2) * i) / a)
        terms.append(Term(coeff, (qpow(q, 1 - i) / a,), (q,) if with_q_inf else (), series))
    return tuple(terms)


def tf2_rhs_terms(inst: TransformInstance) -> tuple:
    """Right side terms; 1/(q^{i-m})_{m-i} is an exact 0 for i > m."""
    q, a, b, m, s = inst.q, inst.a, inst.b, inst.m, inst.s
    ns, cs = inst.n_list, inst.c_list
    terms = []
    for i in range(s + 1):
        coeff = (-_weight(s, i, q, 1)
                 * _prod(qpoch(b * qpow(q, 1 - n + i) / c, n - i, q) for c, n in zip(cs, ns))
                 * rqpoch(qpow(q, i - m), m - i, q)
                 * b ** (1 - s))
        series = PhiSpec(
            (qpow(q, i - m), b * qpow(q, i)) + tuple(b * q / c for c in cs),
            (b * q / a,) + tuple(b * qpow(q, 1 - n + i) / c for c, n in zip(cs, ns)),
            q, qpow(q, 1 - s))
        terms.append(Term(coeff, (b * q / a,), (b * qpow(q, i),), series))
    return tuple(terms)


def tf2_sides(inst: TransformInstance) -> tuple[tuple, tuple]:
    inst.check_tf2()
    return tf2_lhs_terms(inst), tf2_rhs_terms(inst)


def verify_tf1(inst: TransformInstance, eps=DEFAULT_EPS) -> VerificationReport:
    lhs, rhs = tf1_sides(inst)
    return compare_sides(f"tf1[{inst.label()}]", lhs, rhs, inst.q, eps)


def verify_tf2(inst: TransformInstance, eps=DEFAULT_EPS) -> VerificationReport:
    lhs, rhs = tf2_sides(inst)
    return compare_sides(f"tf2[{inst.label()}]", lhs, rhs, inst.q, eps)


def verify_gasper_original(inst: TransformInstance, eps=DEFAULT_EPS) -> VerificationReport:
    lhs, rhs = gasper_original_sides(inst)
    return compare_sides(f"gasper[{inst.label()}]", lhs, rhs, inst.q, eps)


# ---------------------------------------------------------------------------
# summation formulas

SUMMATIONS = ("sf1", "sf2", "sf3", "sf4")
_SF_M = {"sf1": 0, "sf2": 0, "sf3": -1, "sf4": -1}


def sf_sides(which: str, inst: TransformInstance) -> tuple[tuple, tuple]:
    """Sides of the summation formulas; sf1/sf2 need m = 0 and sf3/sf4 need m = -1."""
    if which not in _SF_M:
        raise ValueError(f"unknown summation formula {which!r}")
    if inst.m != _SF_M[which]:
        raise ValueError(f"{which} is the m = {_SF_M[which]} case; got m = {inst.m}")
    q, a, b, s = inst.q, inst.a, inst.b, inst.s
    ns, cs, N = inst.n_list, inst.c_list, inst.n_total
    top_c = tuple(c * qpow(q, n) for c, n in zip(cs, ns))
    if which == "sf1":
        inst.check_tf1()
        lhs = Term(1, series=PhiSpec((a, b) + top_c, (b * q,) + cs, q, qpow(q, 1 - N - s) / a))
        coeff = _prod(qpoch(c / b, n, q) * rqpoch(c, n, q) for c, n in zip(cs, ns)) * b ** (N + s)
        rhs = Term(coeff, (q, b * q / a), (q / a, b * q))
        return (lhs,), (rhs,)
    if which == "sf2":
        inst.check_tf2()
        lhs = tf2_lhs_terms(inst, bottom_shift=1, finite_den=lambda i: rqpoch(1 / b, 1 - i, q))
        coeff = -_prod(qpoch(b * qpow(q, 1 - n) / c, n, q) for c, n in zip(cs, ns)) * b ** (1 - s)
        return lhs, (Term(coeff, (b * q / a,), (b,)),)
    if which == "sf3":
        inst.check_tf1()
        lhs = Term(1, series=PhiSpec((a,) + top_c, cs, q, qpow(q, -N - s) / a))
        return (lhs,), ()
    inst.check_tf2()
    lhs = tf2_lhs_terms(inst, bottom_shift=0, finite_den=lambda i: rqpoch(q / b, -i, q),
                        with_q_inf=False)
    return lhs, ()


def verify_sf(which: str, inst: TransformInstance, eps=DEFAULT_EPS) -> VerificationReport:
    lhs, rhs = sf_sides(which, inst)
    return compare_sides(f"{which}[{inst.label()}]", lhs, rhs, inst.q, eps)


def sf15_value(m: int, n_list: Sequence[int], c_list: Sequence, q) -> mpq:
    """Exact r+1 phi r(q^{-m}, c_i q^{n_i}; c_i; q, q)."""
    q = rat(q)
    c_list = [rat(c) for c in c_list]
    top = [qpow(q, -m)] + [c * qpow(q, n) for c, n in zip(c_list, n_list)]
    return hyper_sum(mpq(1), q, top, c_list + [q], q).value


def verify_sf15(m: int, n_list: Sequence[int], c_list: Sequence, q) -> VerificationReport:
    """Gasper's terminating vanishing sum; exact, margin 0."""
    n_list = [int(n) for n in n_list]
    if len(n_list) != len(c_list):
        raise ValueError("n_list and c_list must have the same length")
    if any(n < 0 for n in n_list) or m < 0 or not m > sum(n_list):
        raise ValueError("need m, n_i >= 0 and m > n_1 + ... + n_r")
    value = sf15_value(m, n_list, c_list, q)
    label = ",".join(str(n) for n in n_list)
    return make_report(f"sf15[m={m},n=({label})]", value, 0, 0)


# ---------------------------------------------------------------------------
# Andrews' multiple-series transformation


def andrews_rhs(spec: MultiPhiDSpec, eps=DEFAULT_EPS) -> BoundedValue:
    """Product prefactor times r+1 phi r(c/a, x_1..x_r; b_1 x_1..b_r x_r; q, a)."""
    q, a, c = spec.q, spec.a, spec.c
    xs, bs = spec.x_list, spec.b_list
    term = Term(1, (a,) + tuple(b * x for b, x in zip(bs, xs)), (c,) + xs,
                PhiSpec((c / a,) + xs, tuple(b * x for b, x in zip(bs, xs)), q, a))
    return term_value(term, q, eps)


def verify_andrews(spec: MultiPhiDSpec, eps=DEFAULT_EPS) -> VerificationReport:
    """phi_D against its single-series form."""
    eps = rat(eps)
    if not all(abs(x) < 1 for x in spec.x_list):
        raise ConvergenceError("every |x_i| must be < 1")
    lhs = _certify(lambda e: phi_D(spec, e), eps / 8)
    rhs = andrews_rhs(spec, eps / 8)
    return make_report(f"andrews[r={len(spec.b_list)}]", lhs, rhs, eps)


def verify_andrews_rewritten(a, b_list: Sequence, c_list: Sequence, x, q,
                             eps=DEFAULT_EPS) -> VerificationReport:
    """r+1 phi r(a, b_i; c_i; q, x) against the normalized multiple series.

    The multiple series is phi~_D(x; c_i/b_i; a x; b_1..b_r) with prefactor
    prod (b_i)_inf / (c_i)_inf.
    """
    a, x, q, eps = rat(a), rat(x), rat(q), rat(eps)
    b_list = tuple(rat(b) for b in b_list)
    c_list = tuple(rat(c) for c in c_list)
    if not abs(x) < 1 or not all(abs(b) < 1 for b in b_list):
        raise ConvergenceError("need |x| < 1 and every |b_i| < 1")
    lhs = term_value(Term(1, series=PhiSpec((a,) + b_list, c_list, q, x)), q, eps / 8)
    spec = MultiPhiDSpec(x, tuple(c / b for b, c in zip(b_list, c_list)), a * x, b_list, q)

    def compute(inner):
        pre = qpoch_ratio_inf(b_list, c_list, q, inner)
        return pre * phi_D_tilde(spec, inner / (pre.magnitude + 1))

    rhs = _certify(compute, eps / 8)
    return make_report(f"andrews_rewritten[r={len(b_list)}]", lhs, rhs, eps)


# ---------------------------------------------------------------------------
# reversal of a normalized multiple series


def _reversal_checks(a, x, q):
    from .qcore import terminating_length

    if terminating_length(a, q) is not None or terminating_length(1 / a, q) is not None:
        raise NonGenericError("a must avoid integer powers of q")
    if not abs(x) < 1:
        raise ConvergenceError("|x| < 1 is required")


def _reversal_prefactor(m, n_list, x, x_list, q) -> mpq:
    N = sum(n_list)
    out = mpq(-1) ** N * qpow(q, -sum(n * (n + 1) for n in n_list) // 2) * x ** (-m - N)
    for n, xn in zip(n_list, x_list):
        out *= xn ** n
    return out


def reversal_lhs(a, b, m, n_list, x, x_list, q, eps=DEFAULT_EPS) -> BoundedValue:
    spec = MultiPhiDSpec(a, (b,) + tuple(qpow(q, -n) for n in n_list), qpow(q, m + 1),
                         (x,) + tuple(x_list), q)
    return _certify(lambda e: phi_D_tilde(spec, e), rat(eps))


def reversal_rhs(a, b, m, n_list, x, x_list, q, eps=DEFAULT_EPS) -> BoundedValue:
    """The reversed sum: finite sums over i_nu outside, a certified j-sum inside."""
    a, b, x, q, eps = rat(a), rat(b), rat(x), rat(q), rat(eps)
    x_list = [rat(v) for v in x_list]
    N = sum(n_list)
    pre = _reversal_prefactor(m, n_list, x, x_list, q)

    def compute(inner):
        pieces = []
        for idx in itertools.product(*(range(n + 1) for n in n_list)):
            w = mpq(1)
            for i, n, xn in zip(idx, n_list, x_list):
                w *= qpoch(qpow(q, -n), i, q) * rqpoch(q, i, q) * (x * qpow(q, n + 1) / xn) ** i
            if w:
                pieces.append((w, m + N - sum(idx)))
        total = BoundedValue.exact(0)
        share = inner / (len(pieces) + 1)
        for w, I in pieces:
            j0 = max(0, I)
            e = share / (abs(w * pre) + 1)
            t0 = (qpoch_ratio_inf([qpow(q, 1 + j0 - I)], [a * qpow(q, j0 - m)], q, e)
                  * (qpoch(b, j0 - I, q) * rqpoch(q, j0, q) * x ** j0))
            inner_sum = hyper_sum(t0, x, [b * qpow(q, j0 - I), a * qpow(q, j0 - m)],
                                  [qpow(q, 1 + j0 - I), qpow(q, 1 + j0)], q, e)
            total = total + inner_sum * w
        return total * pre

    return _certify(compute, eps)


def verify_reversal_lemma(a, b, m: int, n_list: Sequence[int], x, x_list: Sequence, q,
                          eps=DEFAULT_EPS) -> VerificationReport:
    a, b, x, q, eps = rat(a), rat(b), rat(x), rat(q), rat(eps)
    n_list = [int(n) for n in n_list]
    if len(n_list) != len(x_list) or any(n < 0 for n in n_list):
        raise ValueError("n_list must be non-negative and match x_list")
    _reversal_checks(a, x, q)
    lhs = reversal_lhs(a, b, m, n_list, x, x_list, q, eps / 8)
    rhs = reversal_rhs(a, b, m, n_list, x, x_list, q, eps / 8)
    label = ",".join(str(n) for n in n_list)
    return make_report(f"reversal_lemma[m={m},n=({label})]", lhs, rhs, eps)


def reversal_corollary_rhs(a, b, m, n_list, x, x_list, q, eps=DEFAULT_EPS) -> BoundedValue:
    a, b, x, q = rat(a), rat(b), rat(x), rat(q)
    x_list = [rat(v) for v in x_list]
    M = m + sum(n_list)
    spec = MultiPhiDSpec(b * qpow(q, -M),
                         (a * qpow(q, -m),) + tuple(qpow(q, -n) for n in n_list),
                         qpow(q, 1 - M),
                         (x,) + tuple(x * qpow(q, n + 1) / xn for n, xn in zip(n_list, x_list)),
                         q)
    pre = _reversal_prefactor(m, n_list, x, x_list, q)

    def compute(inner):
        p = qpoch_ratio_inf([b], [a * qpow(q, -m)], q, inner) * pre
        return p * phi_D_tilde(spec, inner / (p.magnitude + 1))

    return _certify(compute, rat(eps))


def verify_reversal_corollary(a, b, m: int, n_list: Sequence[int], x, x_list: Sequence, q,
                              eps=DEFAULT_EPS) -> VerificationReport:
    a, b, x, q, eps = rat(a), rat(b), rat(x), rat(q), rat(eps)
    n_list = [int(n) for n in n_list]
    if len(n_list) != len(x_list) or any(n < 0 for n in n_list):
        raise ValueError("n_list must be non-negative and match x_list")
    _reversal_checks(a, x, q)
    M = m + sum(n_list)
    if qpoch(b * qpow(q, -M), M, q) == 0:
        raise NonGenericError("(b q^{-m-N})_{m+N} vanishes")
    lhs = reversal_lhs(a, b, m, n_list, x, x_list, q, eps / 8)
    rhs = reversal_corollary_rhs(a, b, m, n_list, x, x_list, q, eps / 8)
    label = ",".join(str(n) for n in n_list)
    return make_report(f"reversal_corollary[m={m},n=({label})]", lhs, rhs, eps)


# ---------------------------------------------------------------------------
# finite vanishing sum


def vanishing_sum(s: int, n_list: Sequence[int], a, b_list: Sequence, c, x, x_list: Sequence,
                  q) -> mpq:
    """The exact quadruple sum over i, i_1..i_r and j <= s - 1 - (i_1 + ... + i_r)."""
    a, c, x, q = rat(a), rat(c), rat(x), rat(q)
    b_list = [rat(v) for v in b_list]
    x_list = [rat(v) for v in x_list]
    total = mpq(0)
    for i in range(s + 1):
        wi = _weight(s, i, q, 1)
        for idx in itertools.product(*(range(n + 1) for n in n_list)):
            I = sum(idx)
            inner = mpq(1)
            for k, bk, xk in zip(idx, b_list, x_list):
                inner *= qpoch(bk * qpow(q, i), k, q) * rqpoch(q, k, q) * xk ** k
            for j in range(s - I):
                total += (wi * inner
                          * qpoch(qpow(q, 1 - s), I + j, q)
                          * qpoch(a * qpow(q, -i), j, q)
                          * rqpoch(c * qpow(q, i), 1 - s + I + j, q)
                          * rqpoch(q, j, q)
                          * (x * qpow(q, i)) ** j)
    return total


def verify_vanishing_sum_lemma(s: int, n_list: Sequence[int], a, b_list: Sequence, c, x,
                               x_list: Sequence, q) -> VerificationReport:
    n_list = [int(n) for n in n_list]
    if s < 0 or any(n < 0 for n in n_list):
        raise ValueError("s and every n must be non-negative")
    if not len(n_list) == len(b_list) == len(x_list):
        raise ValueError("n_list, b_list and x_list must have the same length")
    value = vanishing_sum(s, n_list, a, b_list, c, x, x_list, q)
    label = ",".join(str(n) for n in n_list)
    return make_report(f"vanishing_sum[s={s},n=({label})]", value, 0, 0)


# ---------------------------------------------------------------------------
# suites


def gasper_instances(r_values=(1, 2), m_range=range(-3, 4), s_range=range(0, 4),
                     n_range=range(0, 4)):
    """(variant, instance) pairs over the criterion grid; tf2 keeps s <= min n."""
    for r in r_values:
        for m in m_range:
            for s in s_range:
                for ns in itertools.product(n_range, repeat=r):
                    yield "tf1", TransformInstance.sample(m, s, ns, "tf1")
                    if not ns or min(ns) >= s:
                        yield "tf2", TransformInstance.sample(m, s, ns, "tf2")


def transform_suite(eps=DEFAULT_EPS, r_values=(1, 2), m_range=range(-3, 4),
                    s_range=range(0, 4), n_range=range(0, 4)) -> list[VerificationReport]:
    """Both transformations over the grid, plus Andrews, reversal and vanishing-sum checks."""
    reports = []
    for variant, inst in gasper_instances(r_values, m_range, s_range, n_range):
        fn = verify_tf1 if variant == "tf1" else verify_tf2
        reports.append(fn(inst, eps))
    A = ANDREWS_SAMPLE
    for r in (1, 2):
        reports.append(verify_andrews(
            MultiPhiDSpec(A["a"], A["b_list"][:r], A["c"], A["x_list"][:r], A["q"]), eps))
        reports.append(verify_andrews_rewritten(
            A["a"], A["b_list"][:r], [A["c"] * (k + 1) / 2 for k in range(r)], A["x_list"][0],
            A["q"], eps))
    R = REVERSAL_SAMPLE
    for m in range(-2, 3):
        for ns in ((0,), (1,), (2,), (1, 1), (2, 1)):
            xs = R["x_list"][: len(ns)]
            reports.append(verify_reversal_lemma(R["a"], R["b"], m, ns, R["x"], xs, R["q"], eps))
            reports.append(verify_reversal_corollary(R["a"], R["b"], m, ns, R["x"], xs, R["q"], eps))
    V = VANISHING_SAMPLE
    for s in range(0, 4):
        for ns in ((0,), (1,), (2,), (1, 2), (2, 2)):
            r = len(ns)
            reports.append(verify_vanishing_sum_lemma(
                s, ns, V["a"], V["b_list"][:r], V["c"], V["x"], V["x_list"][:r], V["q"]))
    return sorted(reports, key=lambda rep: rep.identity_id)


def summation_suite(eps=DEFAULT_EPS, r_values=(0, 1, 2), s_range=range(0, 4),
                    n_range=range(0, 4)) -> list[VerificationReport]:
    """sf1-sf4 at sample points, terminating sf3 instances and Gasper's vanishing sum."""
    reports = []
    q = SAMPLE_Q
    for r in r_values:
        for s in s_range:
            for ns in itertools.product(n_range, repeat=r):
                reports.append(verify_sf("sf1", TransformInstance.sample(0, s, ns, "tf1"), eps))
                reports.append(verify_sf("sf3", TransformInstance.sample(-1, s, ns, "tf1"), eps))
                if not ns or min(ns) >= s:
                    reports.append(verify_sf("sf2", TransformInstance.sample(0, s, ns, "tf2"), eps))
                    reports.append(verify_sf("sf4", TransformInstance.sample(-1, s, ns, "tf2"), eps))
                cs = SAMPLE_C[:r]
                a_term = qpow(q, -sum(ns) - s - 1)
                inst = TransformInstance(-1, s, ns, cs, a_term, SAMPLE_B, q)
                rep = verify_sf("sf3", inst, eps)
                reports.append(VerificationReport("terminating_" + rep.identity_id, rep.lhs, rep.rhs,
                                                  rep.passed and rep.margin == 0, rep.margin,
                                                  rep.tolerance))
    for r in (1, 2):
        for ns in itertools.product(range(0, 3), repeat=r):
            for m in range(sum(ns) + 1, sum(ns) + 4):
                reports.append(verify_sf15(m, ns, SAMPLE_C[:r], q))
    return sorted(reports, key=lambda rep: rep.identity_id)

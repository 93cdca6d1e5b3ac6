"""Coefficients of the three-term relation

    2phi1(a q^k, b q^l; c q^m; q, x q^n) = Q 2phi1(aq, bq; cq; q, x) + R 2phi1(a, b; c; q, x)

computed from closed forms, plus the checks that tie those forms together.

All closed forms assume k <= l; :class:`ShiftQuad` canonicalizes by swapping
(k, l) together with (a, b), which leaves 2phi1 unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from gmpy2 import mpq

from .poly import Poly, RationalFunction, qpoch_x
from .qcore import GenericPoint, qpoch, qpow, rat_str, rqpoch
from .series import (
    DEFAULT_ORDER,
    TruncatedSeries,
    finite_product_series,
    phi21_series,
    phi4_3_terminating,
)


@dataclass(frozen=True)
class ShiftQuad:
    k: int
    l: int
    m: int
    n: int

    @classmethod
    def parse(cls, text: str) -> "ShiftQuad":
        parts = [int(p) for p in text.replace(" ", "").split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected four integers k,l,m,n, got {text!r}")
        return cls(*parts)

    @property
    def total(self) -> int:
        """k + l - m + n, the quantity that selects the formula branch."""
        return self.k + self.l - self.m + self.n

    @property
    def d(self) -> int:
        return max(self.total, 0) + max(self.m, 0) - min(self.n, 0) - self.k - 1

    def inner(self) -> "ShiftQuad":
        """The quad whose P enters R."""
        return ShiftQuad(self.k - 1, self.l - 1, self.m - 1, self.n)

    def canonical(self, point: GenericPoint) -> tuple["ShiftQuad", GenericPoint, bool]:
        if self.k <= self.l:
            return self, point, False
        return ShiftQuad(self.l, self.k, self.m, self.n), point.swapped(), True

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.k, self.l, self.m, self.n)

    def __str__(self):
        return f"({self.k},{self.l},{self.m},{self.n})"


def grid(bound: int):
    """All quads with |k|, |l|, |m|, |n| <= bound, in lexicographic order."""
    r = range(-bound, bound + 1)
    for k in r:
        for l in r:
            for m in r:
                for n in r:
                    yield ShiftQuad(k, l, m, n)


def _key(quad: ShiftQuad, point: GenericPoint):
    return (quad.as_tuple(), point.q, point.a, point.b, point.c)


def _require_ordered(quad: ShiftQuad):
    if quad.k > quad.l:
        raise ValueError(f"closed forms need k <= l; canonicalize {quad} first")


# ---------------------------------------------------------------------------
# coefficient families


class _Families:
    """Lazily cached A, B, Atilde, Btilde, C, D, Ctilde, Dtilde at one quad and point."""

    def __init__(self, quad: ShiftQuad, point: GenericPoint):
        _require_ordered(quad)
        self.quad = quad
        self.q, self.a, self.b, self.c = point.q, point.a, point.b, point.c
        self._cache: dict = {}

    def get(self, name: str, j: int) -> mpq:
        if j < 0:
            return mpq(0)
        key = (name, j)
        if key not in self._cache:
            self._cache[key] = getattr(self, "_" + name)(j)
        return self._cache[key]

    # Theorem families ---------------------------------------------------
    def _A(self, j):
        k, l, m, n = self.quad.as_tuple()
        q, a, b, c = self.q, self.a, self.b, self.c
        pref = (-qpoch(a * q / c, k - m, q) * qpoch(b * q / c, l - m, q) * qpoch(c, m - j - 1, q)
                * rqpoch(q * q / c, -m - 1, q) * rqpoch(qpow(q, -j), j, q)
                * rqpoch(a, k - j, q) * rqpoch(b, l - j, q) * qpow(c * qpow(q, m - j - 1), 1 - n))
        s = phi4_3_terminating(j, [c * qpow(q, m - j - 1), a, b],
                               [c, a * qpow(q, k - j), b * qpow(q, l - j)], qpow(q, 1 - n), q)
        return pref * s

    def _B(self, j):
        k, l, m, n = self.quad.as_tuple()
        q, a, b, c = self.q, self.a, self.b, self.c
        pref = (qpoch(a * q / c, j, q) * qpoch(b * q / c, j, q)
                * rqpoch(q, j, q) * rqpoch(q * q / c, j, q))
        s = phi4_3_terminating(j, [c * qpow(q, -j - 1), c * qpow(q, m - k) / a, c * qpow(q, m - l) / b],
                               [c * qpow(q, m), c * qpow(q, -j) / a, c * qpow(q, -j) / b],
                               qpow(q, self.quad.total + 1), q)
        return pref * s

    def _At(self, j):
        k, l, m, n = self.quad.as_tuple()
        q, a, b, c = self.q, self.a, self.b, self.c
        pref = (qpoch(c, m, q) * qpoch(a * q / c, j + k - m, q) * qpoch(b * q / c, j + l - m, q)
                * rqpoch(a, k, q) * rqpoch(b, l, q) * rqpoch(q, j, q) * rqpoch(q * q / c, j - m, q)
                * qpow(c * qpow(q, m - j - 1), -n))
        s = phi4_3_terminating(j, [c * qpow(q, m - j - 1), c / a, c / b],
                               [c, c * qpow(q, m - k - j) / a, c * qpow(q, m - l - j) / b],
                               qpow(q, m - k - l - n + 1), q)
        return pref * s

    def _Bt(self, j):
        k, l, m, n = self.quad.as_tuple()
        q, a, b, c = self.q, self.a, self.b, self.c
        pref = (qpoch(a * qpow(q, -j), j, q) * qpoch(b * qpow(q, -j), j, q)
                * rqpoch(qpow(q, -j), j, q) * rqpoch(c * qpow(q, -j - 1), j, q) * qpow(q, -j))
        s = phi4_3_terminating(j, [c * qpow(q, -j - 1), a * qpow(q, k), b * qpow(q, l)],
                               [c * qpow(q, m), a * qpow(q, -j), b * qpow(q, -j)], qpow(q, 1 + n), q)
        return pref * s

    # Proposition families -----------------------------------------------
    @property
    def mu1(self) -> mpq:
        if "mu1" not in self._cache:
            k, l, m, n = self.quad.as_tuple()
            q, a, b, c = self.q, self.a, self.b, self.c
            self._cache["mu1"] = (qpow(q, k * (m - k - l - n + 1)) * qpow(a, m - k - l - n)
                                  * qpow(c / (a * b), k) * qpoch(a, k, q)
                                  * qpoch(a * q / c, k - m, q) * rqpoch(a * q / b, k - l, q))
        return self._cache["mu1"]

    @property
    def mu2(self) -> mpq:
        if "mu2" not in self._cache:
            k, l, m, n = self.quad.as_tuple()
            q, a, b, c = self.q, self.a, self.b, self.c
            self._cache["mu2"] = (qpow(q, l * (m - k - l - n + 1)) * qpow(b, m - k - l - n)
                                  * qpow(c / (a * b), l) * qpoch(b, l, q)
                                  * qpoch(b * q / c, l - m, q) * rqpoch(b * q / a, l - k, q))
        return self._cache["mu2"]

    @property
    def mu(self) -> mpq:
        if "mu" not in self._cache:
            k, l, m, n = self.quad.as_tuple()
            q, a, b, c = self.q, self.a, self.b, self.c
            M, N = max(self.quad.total, 0), min(n, 0)
            sign = -1 if (k + l - m + M - N - 1) % 2 else 1
            e2 = k * (k - 1) + l * (l - 1) - m * (m - 1) + M * (M - 1) - N * (N - 1)
            self._cache["mu"] = (sign * qpow(q, e2 // 2) * (q - c) * qpow(a, k) * qpow(b, l)
                                 / ((b - a) * qpow(c, m)) * qpow(a * b / c, M)
                                 * qpoch(c, m, q) * rqpoch(a, k, q) * rqpoch(b, l, q))
        return self._cache["mu"]

    def _C(self, j):
        k, l, m, n = self.quad.as_tuple()
        q, a, b, c = self.q, self.a, self.b, self.c
        pref = (self.mu1 * qpoch(b, j, q) * qpoch(b * q / c, j, q) * rqpoch(q, j, q)
                * rqpoch(b * q / a, j, q) * qpow(c * q / (a * b), j))
        s = phi4_3_terminating(j, [a * qpow(q, -j) / b, qpow(q, 1 - l) / b, c * qpow(q, m - l) / b],
                               [a * qpow(q, k - l + 1) / b, qpow(q, 1 - j) / b, c * qpow(q, -j) / b],
                               qpow(q, 1 - n), q)
        return pref * s

    def _D(self, j):
        k, l, m, n = self.quad.as_tuple()
        q, a, b, c = self.q, self.a, self.b, self.c
        pref = (self.mu2 * qpoch(qpow(q, 1 - k) / a, j, q) * qpoch(c * qpow(q, m - k) / a, j, q)
                * rqpoch(q, j, q) * rqpoch(b * qpow(q, l - k + 1) / a, j, q) * qpow(q, (1 - n) * j))
        s = phi4_3_terminating(j, [a * qpow(q, k - l - j) / b, a, a * q / c],
                               [a * q / b, a * qpow(q, k - j), a * qpow(q, k - m - j + 1) / c],
                               qpow(q, self.quad.total + 1), q)
        return pref * s

    def _Ct(self, j):
        k, l, m, n = self.quad.as_tuple()
        q, a, b, c = self.q, self.a, self.b, self.c
        pref = (self.mu1 * qpoch(a * qpow(q, k), j, q) * qpoch(a * qpow(q, k - m + 1) / c, j, q)
                * rqpoch(q, j, q) * rqpoch(a * qpow(q, k - l + 1) / b, j, q)
                * qpow(c * qpow(q, m - k - l - n + 1) / (a * b), j))
        s = phi4_3_terminating(j, [b * qpow(q, l - k - j) / a, q / a, c / a],
                               [b * q / a, qpow(q, 1 - k - j) / a, c * qpow(q, m - k - j) / a],
                               qpow(q, 1 + n), q)
        return pref * s

    def _Dt(self, j):
        k, l, m, n = self.quad.as_tuple()
        q, a, b, c = self.q, self.a, self.b, self.c
        pref = (self.mu2 * qpoch(q / b, j, q) * qpoch(c / b, j, q) * rqpoch(q, j, q)
                * rqpoch(a * q / b, j, q) * qpow(q, j))
        s = phi4_3_terminating(j, [b * qpow(q, -j) / a, b * qpow(q, l), b * qpow(q, l - m + 1) / c],
                               [b * qpow(q, l - k + 1) / a, b * qpow(q, -j), b * qpow(q, 1 - j) / c],
                               qpow(q, m - k - l - n + 1), q)
        return pref * s


@lru_cache(maxsize=4096)
def _families_cached(key) -> _Families:
    (k, l, m, n), q, a, b, c = key
    return _Families(ShiftQuad(k, l, m, n), GenericPoint(q, a, b, c))


def families(quad: ShiftQuad, point: GenericPoint) -> _Families:
    return _families_cached(_key(quad, point))


def coeff_A(j: int, quad: ShiftQuad, point: GenericPoint) -> mpq:
    return families(quad, point).get("A", j)


def coeff_B(j: int, quad: ShiftQuad, point: GenericPoint) -> mpq:
    return families(quad, point).get("B", j)


def coeff_Atilde(j: int, quad: ShiftQuad, point: GenericPoint) -> mpq:
    return families(quad, point).get("At", j)


def coeff_Btilde(j: int, quad: ShiftQuad, point: GenericPoint) -> mpq:
    return families(quad, point).get("Bt", j)


def coeff_C(j: int, quad: ShiftQuad, point: GenericPoint) -> mpq:
    return families(quad, point).get("C", j)


def coeff_D(j: int, quad: ShiftQuad, point: GenericPoint) -> mpq:
    return families(quad, point).get("D", j)


def coeff_Ctilde(j: int, quad: ShiftQuad, point: GenericPoint) -> mpq:
    return families(quad, point).get("Ct", j)


def coeff_Dtilde(j: int, quad: ShiftQuad, point: GenericPoint) -> mpq:
    return families(quad, point).get("Dt", j)


def mu(quad: ShiftQuad, point: GenericPoint) -> mpq:
    return families(quad, point).mu


def mu1(quad: ShiftQuad, point: GenericPoint) -> mpq:
    return families(quad, point).mu1


def mu2(quad: ShiftQuad, point: GenericPoint) -> mpq:
    return families(quad, point).mu2


# ---------------------------------------------------------------------------
# the polynomial P


def _binomial_weights(n: int, q: mpq, power: int) -> list[mpq]:
    """(q^{-n})_i/(q)_i q^{power i} for i <= n (n >= 0)."""
    return [qpoch(qpow(q, -n), i, q) * rqpoch(q, i, q) * qpow(q, power * i) for i in range(n + 1)]


def _theorem_coeff(F: _Families, j: int) -> mpq:
    k, l, m, n = F.quad.as_tuple()
    q = F.q
    mm = max(m, 0)
    total = mpq(0)
    if F.quad.total >= 0:
        s = max(n, 0)
        for i, w in enumerate(_binomial_weights(s, q, n)):
            total += w * (F.get("A", j - i + m - mm) - F.get("B", j - i - mm))
    else:
        s = -min(n, 0)
        for i in range(s + 1):
            w = qpoch(qpow(q, n), i, q) * rqpoch(q, i, q)
            total += w * (F.get("At", j - i + m - mm) - F.get("Bt", j - i - mm))
    return total


def _proposition_coeff(F: _Families, j: int) -> mpq:
    """Coefficient attached to x^{d-j} in the second expression, before the factor mu."""
    k, l, m, n = F.quad.as_tuple()
    q = F.q
    total = mpq(0)
    if F.quad.total >= 0:
        s = max(n, 0)
        for i, w in enumerate(_binomial_weights(s, q, 1)):
            total += w * (F.get("C", j - i) - F.get("D", j - i + k - l))
    else:
        s = -min(n, 0)
        for i in range(s + 1):
            w = qpoch(qpow(q, n), i, q) * rqpoch(q, i, q) * qpow(q, (1 - n) * i)
            total += w * (F.get("Ct", j - i) - F.get("Dt", j - i + k - l))
    return total


def compute_P_theorem(quad: ShiftQuad, point: GenericPoint) -> Poly:
    """P from the A/B (or Atilde/Btilde) double sum; the zero polynomial when d < 0."""
    _require_ordered(quad)
    F = families(quad, point)
    return Poly(_theorem_coeff(F, j) for j in range(quad.d + 1))


def compute_Ptilde(quad: ShiftQuad, point: GenericPoint) -> Poly:
    _require_ordered(quad)
    F = families(quad, point)
    d = quad.d
    return Poly(_proposition_coeff(F, d - e) for e in range(d + 1))


def compute_P_proposition(quad: ShiftQuad, point: GenericPoint) -> Poly:
    """P as mu times the C/D (or Ctilde/Dtilde) double sum."""
    if quad.d < 0:
        return Poly()
    return compute_Ptilde(quad, point) * mu(quad, point)


def leading_coefficient(quad: ShiftQuad, point: GenericPoint) -> mpq:
    """Closed form for the coefficient of x^d in P (k <= l, d >= 0)."""
    _require_ordered(quad)
    if quad.d < 0:
        raise ValueError(f"{quad} has d = {quad.d} < 0; P is identically zero")
    k, l, m, n = quad.as_tuple()
    q, a, b, c = point.q, point.a, point.b, point.c
    base = mu(quad, point) * qpow(c / (a * b), k) * qpow(q, k * (m - k - l - n + 1))
    if k == l:
        return base * (qpow(a, m - 2 * k - n) * qpoch(a, k, q) * qpoch(a * q / c, k - m, q)
                       - qpow(b, m - 2 * k - n) * qpoch(b, k, q) * qpoch(b * q / c, k - m, q))
    return base * qpow(a, m - k - l - n) * qpoch(a, k, q) * qpoch(a * q / c, k - m, q) * rqpoch(a * q / b, k - l, q)


def check_leading_coefficient(quad: ShiftQuad, point: GenericPoint) -> dict:
    P = compute_P_theorem(quad, point)
    d = quad.d
    out = {"quad": list(quad.as_tuple()), "d": d, "degree": P.degree, "degree_ok": P.degree <= d}
    if d >= 0:
        lc = leading_coefficient(quad, point)
        out["leading_ok"] = P[d] == lc
        out["leading"] = rat_str(lc)
    else:
        out["leading_ok"] = P.is_zero()
    out["passed"] = out["degree_ok"] and out["leading_ok"]
    return out


# ---------------------------------------------------------------------------
# Q and R


def compute_Q(quad: ShiftQuad, point: GenericPoint) -> RationalFunction:
    """Q as a reduced fraction of polynomials in x (any k, l; canonicalized internally)."""
    quad, point, _ = quad.canonical(point)
    k, l, m, n = quad.as_tuple()
    q, a, b, c = point.q, point.a, point.b, point.c
    P = compute_P_theorem(quad, point)
    if P.is_zero():
        return RationalFunction(Poly(), Poly.const(1))
    pre = -(1 - a) * (1 - b) * c / ((q - c) * (1 - c))
    out = (RationalFunction.x_power(1 - max(m, 0), pre) * qpoch_x(1, min(n, 0), q)
           / qpoch_x(a * b * q / c, max(quad.total, 0) - 1, q) * RationalFunction(P))
    return out.reduced()


def compute_R(quad: ShiftQuad, point: GenericPoint) -> RationalFunction:
    quad, point, _ = quad.canonical(point)
    m, n = quad.m, quad.n
    q, a, b, c = point.q, point.a, point.b, point.c
    shifted = point.shift(1, 1, 1)
    P = compute_P_theorem(quad.inner(), shifted)
    if P.is_zero():
        return RationalFunction(Poly(), Poly.const(1))
    out = (RationalFunction.x_power(-max(m - 1, 0), -1) * qpoch_x(1, min(n, 0), q)
           / qpoch_x(a * b * q / c, max(quad.total - 1, 0), q) * RationalFunction(P))
    return out.reduced()


def compute_Q_tilde(quad: ShiftQuad, point: GenericPoint) -> RationalFunction:
    """Q rescaled to the normalized series: Q * (aq)_{k-1} (bq)_{l-1} / (cq)_{m-1}."""
    k, l, m, _ = quad.as_tuple()
    q, a, b, c = point.q, point.a, point.b, point.c
    f = qpoch(a * q, k - 1, q) * qpoch(b * q, l - 1, q) * rqpoch(c * q, m - 1, q)
    return compute_Q(quad, point) * f


def compute_R_tilde(quad: ShiftQuad, point: GenericPoint) -> RationalFunction:
    """R * (a)_k (b)_l / (c)_m."""
    k, l, m, _ = quad.as_tuple()
    q, a, b, c = point.q, point.a, point.b, point.c
    f = qpoch(a, k, q) * qpoch(b, l, q) * rqpoch(c, m, q)
    return compute_R(quad, point) * f


def shifted_series(quad: ShiftQuad, point: GenericPoint, N: int) -> TruncatedSeries:
    """2phi1(a q^k, b q^l; c q^m; q, x q^n) to order N."""
    k, l, m, n = quad.as_tuple()
    q = point.q
    return phi21_series(point.a * qpow(q, k), point.b * qpow(q, l), point.c * qpow(q, m), q, qpow(q, n), N)


def relation_residual(lhs: TruncatedSeries, Q: RationalFunction, R: RationalFunction,
                      point: GenericPoint, N: int) -> TruncatedSeries:
    """den(Q) den(R) lhs - num(Q) den(R) phi(aq,bq;cq) - num(R) den(Q) phi(a,b;c)."""
    q, a, b, c = point.q, point.a, point.b, point.c
    s1 = phi21_series(a * q, b * q, c * q, q, 1, N)
    s0 = phi21_series(a, b, c, q, 1, N)
    return lhs * (Q.den * R.den) - s1 * (Q.num * R.den) - s0 * (R.num * Q.den)


def _residual_report(identity: str, quad, resid: TruncatedSeries, N: int, **extra) -> dict:
    bad = resid.first_nonzero()
    out = {"identity_id": identity, "quad": list(quad.as_tuple()), "order": N,
           "passed": bad is None, "first_mismatch": bad}
    out.update(extra)
    return out


def verify_three_term(quad: ShiftQuad, point: GenericPoint, N: int = DEFAULT_ORDER) -> dict:
    _, _, swapped = quad.canonical(point)
    Q = compute_Q(quad, point)
    R = compute_R(quad, point)
    resid = relation_residual(shifted_series(quad, point, N), Q, R, point, N)
    return _residual_report("three_term", quad, resid, N, swapped=swapped)


def corollary_factor(point: GenericPoint) -> RationalFunction:
    """(1 - aq)(1 - bq) x (c - abq x) / ((1 - c)(1 - cq))."""
    q, a, b, c = point.q, point.a, point.b, point.c
    s = (1 - a * q) * (1 - b * q) / ((1 - c) * (1 - c * q))
    return RationalFunction(Poly([0, s * c, -s * a * b * q]))


def verify_corollary(quad: ShiftQuad, point: GenericPoint, N: int = DEFAULT_ORDER) -> dict:
    """Q(k-1, l-1, m-1, n) at (aq, bq, cq) against the stated multiple of R(k, l, m, n)."""
    lhs = compute_Q(quad.inner(), point.shift(1, 1, 1))
    rhs = corollary_factor(point) * compute_R(quad, point)
    diff = lhs.num * rhs.den - rhs.num * lhs.den
    bad = None if diff.is_zero() else diff.valuation()
    return {"identity_id": "corollary", "quad": list(quad.as_tuple()), "passed": diff.is_zero(),
            "first_mismatch": bad}


def general_three_term(quad1: ShiftQuad, quad2: ShiftQuad, point: GenericPoint,
                       N: int = DEFAULT_ORDER):
    """Relation between the quad1 shift, the quad2 shift and 2phi1(a, b; c; x).

    Eliminates 2phi1(aq, bq; cq; x) from the two basic relations.
    """
    Q1, R1 = compute_Q(quad1, point), compute_R(quad1, point)
    Q2, R2 = compute_Q(quad2, point), compute_R(quad2, point)
    if Q2.is_zero():
        raise ZeroDivisionError(f"elimination is degenerate: Q{quad2} vanishes identically")
    Qp = (Q1 / Q2).reduced()
    Rp = (R1 - Qp * R2).reduced()
    lhs = shifted_series(quad1, point, N)
    mid = shifted_series(quad2, point, N)
    s0 = phi21_series(point.a, point.b, point.c, point.q, 1, N)
    resid = lhs * (Qp.den * Rp.den) - mid * (Qp.num * Rp.den) - s0 * (Rp.num * Qp.den)
    bad = resid.first_nonzero()
    report = {"identity_id": "general_three_term", "quad1": list(quad1.as_tuple()),
              "quad2": list(quad2.as_tuple()), "order": N, "passed": bad is None,
              "first_mismatch": bad}
    return Qp, Rp, report


def verify_P_equals_mu_Ptilde(quad: ShiftQuad, point: GenericPoint) -> dict:
    quad, point, _ = quad.canonical(point)
    P1 = compute_P_theorem(quad, point)
    P2 = compute_P_proposition(quad, point)
    return {"identity_id": "P_equals_mu_Ptilde", "quad": list(quad.as_tuple()),
            "passed": P1 == P2, "degree_bound": quad.d}


# ---------------------------------------------------------------------------
# product forms and vanishing thresholds


def family_series(name: str, quad: ShiftQuad, point: GenericPoint, N: int) -> TruncatedSeries:
    F = families(quad, point)
    return TruncatedSeries(F.get(name, j) for j in range(N + 1))


def family_product_series(name: str, quad: ShiftQuad, point: GenericPoint, N: int) -> TruncatedSeries:
    """Each generating series written as a product of two 2phi1 series."""
    k, l, m, n = quad.as_tuple()
    q, a, b, c = point.q, point.a, point.b, point.c
    g = a * b * qpow(q, quad.total) / c
    pref = (qpoch(a * q / c, k - m, q) * qpoch(b * q / c, l - m, q) * qpoch(c, m, q)
            * rqpoch(q * q / c, -m, q) * rqpoch(a, k, q) * rqpoch(b, l, q)
            * qpow(c * qpow(q, m - 1), -n))
    if name == "A":
        return (phi21_series(qpow(q, 1 - k) / a, qpow(q, 1 - l) / b, qpow(q, 2 - m) / c, q, g, N)
                * phi21_series(a, b, c, q, 1, N)).scale(pref)
    if name == "B":
        return (phi21_series(c * qpow(q, m - k) / a, c * qpow(q, m - l) / b, c * qpow(q, m), q, g, N)
                * phi21_series(a * q / c, b * q / c, q * q / c, q, 1, N))
    if name == "At":
        return (phi21_series(a * qpow(q, k + 1 - m) / c, b * qpow(q, l + 1 - m) / c, qpow(q, 2 - m) / c,
                             q, qpow(q, n), N)
                * phi21_series(c / a, c / b, c, q, a * b / c, N)).scale(pref)
    if name == "Bt":
        return (shifted_series(quad, point, N) * phi21_series(q / a, q / b, q * q / c, q, a * b / c, N))
    raise ValueError(f"unknown family {name!r}")


def verify_P_product_form(quad: ShiftQuad, point: GenericPoint, N: int = 30) -> dict:
    """Generating series against their 2phi1 products, and P rebuilt from them.

    The rebuilt series must agree with P through order N, which also shows
    that every coefficient beyond degree d vanishes.
    """
    quad, point, _ = quad.canonical(point)
    k, l, m, n = quad.as_tuple()
    q = point.q
    names = ("A", "B") if quad.total >= 0 else ("At", "Bt")
    fam = {}
    failures = []
    for name in names:
        s = family_series(name, quad, point, N)
        if s != family_product_series(name, quad, point, N):
            failures.append(f"series_{name}")
        fam[name] = s
    first, second = (fam[names[0]], fam[names[1]])
    if quad.total >= 0:
        pre = finite_product_series(1, max(n, 0), q, N)
    else:
        pre = finite_product_series(qpow(q, min(n, 0)), -min(n, 0), q, N)
    rebuilt = pre * (first.shift(max(-m, 0)) - second.shift(max(m, 0)))
    P = compute_P_theorem(quad, point)
    if rebuilt != TruncatedSeries.from_poly(P, N):
        failures.append("assembled_P")
    return {"identity_id": "P_product_form", "quad": list(quad.as_tuple()), "order": N,
            "passed": not failures, "failures": failures}


def verify_Ptilde_product_form(quad: ShiftQuad, point: GenericPoint, N: int = 30) -> dict:
    """The reversed polynomial x^{-d} Ptilde as a series in u = 1/x built from 2phi1 products."""
    quad, point, _ = quad.canonical(point)
    k, l, m, n = quad.as_tuple()
    q, a, b, c = point.q, point.a, point.b, point.c
    F = families(quad, point)
    if quad.total >= 0:
        s = max(n, 0)
        pre = finite_product_series(qpow(q, 1 - s), s, q, N)
        left = (phi21_series(qpow(q, 1 - l) / b, c * qpow(q, m - l) / b, a * qpow(q, k - l + 1) / b,
                             q, qpow(q, 1 - n), N)
                * phi21_series(b, b * q / c, b * q / a, q, c * q / (a * b), N)).scale(F.mu1)
        right = (phi21_series(qpow(q, 1 - k) / a, c * qpow(q, m - k) / a, b * qpow(q, l - k + 1) / a,
                              q, qpow(q, 1 - n), N)
                 * phi21_series(a, a * q / c, a * q / b, q, c * q / (a * b), N)).scale(F.mu2)
    else:
        pre = finite_product_series(q, -min(n, 0), q, N)
        g = c * qpow(q, m - k - l - n + 1) / (a * b)
        left = (phi21_series(a * qpow(q, k), a * qpow(q, k - m + 1) / c, a * qpow(q, k - l + 1) / b, q, g, N)
                * phi21_series(q / a, c / a, b * q / a, q, q, N)).scale(F.mu1)
        right = (phi21_series(b * qpow(q, l), b * qpow(q, l - m + 1) / c, b * qpow(q, l - k + 1) / a, q, g, N)
                 * phi21_series(q / b, c / b, a * q / b, q, q, N)).scale(F.mu2)
    series_u = pre * (left - right.shift(l - k))
    d = quad.d
    expected = [_proposition_coeff(F, j) for j in range(max(d + 1, 0))]
    ok = series_u == TruncatedSeries(expected, N)
    return {"identity_id": "Ptilde_product_form", "quad": list(quad.as_tuple()), "order": N,
            "passed": ok}


def _weights_pos(n, q, power):
    return _binomial_weights(n, q, power)


def _weights_neg(n, q, power):
    return [qpoch(qpow(q, n), i, q) * rqpoch(q, i, q) * qpow(q, power * i) for i in range(-n + 1)]


def lemma_vanishing(quad: ShiftQuad, point: GenericPoint, extra: int = 15) -> dict:
    """Check each applicable vanishing statement for j from its threshold to threshold + extra.

    Both the A/B statements and their C/D counterparts are checked; a quad can
    satisfy two branches when k + l - m + n = 0 or n = 0.
    """
    quad, point, _ = quad.canonical(point)
    k, l, m, n = quad.as_tuple()
    F = families(quad, point)
    q = F.q
    T = quad.total
    checks = []

    def run(label, start, fn):
        bad = [j for j in range(start, start + extra + 1) if fn(j) != 0]
        checks.append({"statement": label, "from": start, "to": start + extra, "passed": not bad,
                       "failing_j": bad[:3]})

    if T >= 0 and n >= 0:
        w = _weights_pos(n, q, n)
        run("AB_i", l + n, lambda j: sum((wi * (F.get("A", j - i) - F.get("B", j - i - m))
                                          for i, wi in enumerate(w)), mpq(0)))
        w1 = _weights_pos(n, q, 1)
        run("CD_i", max(l, l - m) + n, lambda j: sum((wi * (F.get("C", j - i) - F.get("D", j - i + k - l))
                                                     for i, wi in enumerate(w1)), mpq(0)))
    if T >= 0 and n <= 0:
        run("AB_ii", l, lambda j: F.get("A", j) - F.get("B", j - m))
        run("CD_ii", max(l, l - m), lambda j: F.get("C", j) - F.get("D", j + k - l))
    if T <= 0 and n >= 0:
        run("AB_iii", m - k, lambda j: F.get("At", j) - F.get("Bt", j - m))
        run("CD_iii", max(-k, m - k), lambda j: F.get("Ct", j) - F.get("Dt", j + k - l))
    if T <= 0 and n <= 0:
        w = _weights_neg(n, q, 0)
        run("AB_iv", m - k - n, lambda j: sum((wi * (F.get("At", j - i) - F.get("Bt", j - i - m))
                                               for i, wi in enumerate(w)), mpq(0)))
        w1 = _weights_neg(n, q, 1 - n)
        run("CD_iv", max(-k, m - k) - n, lambda j: sum((wi * (F.get("Ct", j - i) - F.get("Dt", j - i + k - l))
                                                        for i, wi in enumerate(w1)), mpq(0)))
    return {"identity_id": "lemma_vanishing", "quad": list(quad.as_tuple()),
            "passed": all(c["passed"] for c in checks), "checks": checks}


# ---------------------------------------------------------------------------
# uniqueness: recover the numerators by linear algebra


def _solve_exact(rows: list[list[mpq]], rhs: list[mpq]) -> list[mpq] | None:
    """Least-squares-free exact solve of a consistent overdetermined system; None if singular."""
    n = len(rows[0]) if rows else 0
    M = [list(r) + [v] for r, v in zip(rows, rhs)]
    piv_row = 0
    pivots = []
    for col in range(n):
        p = next((r for r in range(piv_row, len(M)) if M[r][col] != 0), None)
        if p is None:
            return None
        M[piv_row], M[p] = M[p], M[piv_row]
        inv = 1 / M[piv_row][col]
        M[piv_row] = [v * inv for v in M[piv_row]]
        for r in range(len(M)):
            if r != piv_row and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[piv_row])]
        pivots.append(col)
        piv_row += 1
    if any(M[r][n] != 0 for r in range(piv_row, len(M))):
        return None
    return [M[i][n] for i in range(n)]


def uniqueness_check(quad: ShiftQuad, point: GenericPoint, extra: int = 6) -> dict:
    """Solve for the numerators of Q and R from series coefficients alone.

    With D = den(Q) den(R) fixed, the unknowns are the coefficients of
    U = num(Q) den(R) and V = num(R) den(Q) in D*lhs = U*phi(aq,bq;cq) + V*phi(a,b;c).
    A unique solution equal to the closed forms confirms them independently.
    """
    Q, R = compute_Q(quad, point), compute_R(quad, point)
    U = Q.num * R.den
    V = R.num * Q.den
    D = Q.den * R.den
    du, dv = max(U.degree, 0) + 1, max(V.degree, 0) + 1
    N = du + dv + extra
    q, a, b, c = point.q, point.a, point.b, point.c
    lhs = shifted_series(quad, point, N) * D
    s1 = phi21_series(a * q, b * q, c * q, q, 1, N)
    s0 = phi21_series(a, b, c, q, 1, N)
    rows, rhs = [], []
    for e in range(N + 1):
        row = [s1[e - i] if e - i >= 0 else mpq(0) for i in range(du + 1)]
        row += [s0[e - i] if e - i >= 0 else mpq(0) for i in range(dv + 1)]
        rows.append(row)
        rhs.append(lhs[e])
    sol = _solve_exact(rows, rhs)
    if sol is None:
        return {"identity_id": "uniqueness", "quad": list(quad.as_tuple()), "passed": False,
                "reason": "system singular or inconsistent"}
    U2, V2 = Poly(sol[: du + 1]), Poly(sol[du + 1:])
    ok = U2 == U and V2 == V
    return {"identity_id": "uniqueness", "quad": list(quad.as_tuple()), "passed": ok}

"""Formal power series and basic hypergeometric evaluation.

Two evaluation regimes live here:

* coefficient-exact series in an indeterminate (``phi_series_in_x``), used by
  every relation check;
* numeric values with certified tail bounds (``phi_value``, ``phi_D``), used
  for the transformation and summation identities.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from gmpy2 import mpq

from .poly import Poly, RationalFunction
from .qcore import (
    BoundedValue,
    NonGenericError,
    as_bounded,
    prec_for,
    qpoch_inf,
    qpow,
    rat,
    terminating_length,
)

DEFAULT_ORDER = 40
DEFAULT_EPS = mpq(1, 10 ** 25)
MAX_TERMS = 200000


# ---------------------------------------------------------------------------
# power series


class TruncatedSeries:
    """sum_{i<=order} c_i x^i + O(x^{order+1}) with exact rational c_i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = [rat(c) for c in coeffs]
        if order is not None:
            cs = (cs + [mpq(0)] * (order + 1 - len(cs)))[: order + 1]
        if not cs:
            raise ValueError("a truncated series needs order >= 0")
        self.coeffs: tuple = tuple(cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls([1], order)

    @classmethod
    def from_poly(cls, p: Poly, order: int) -> "TruncatedSeries":
        return cls(p.coeffs, order)

    @classmethod
    def geometric(cls, order: int, ratio=1) -> "TruncatedSeries":
        r = rat(ratio)
        return cls([r ** i for i in range(order + 1)])

    def __getitem__(self, i: int) -> mpq:
        return self.coeffs[i]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def _other(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, Poly):
            return TruncatedSeries.from_poly(other, self.order)
        return TruncatedSeries([other], self.order)

    def __add__(self, other):
        o = self._other(other)
        n = min(self.order, o.order)
        return TruncatedSeries(self.coeffs[i] + o.coeffs[i] for i in range(n + 1))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if not isinstance(other, (TruncatedSeries, Poly)):
            return self.scale(other)
        o = self._other(other)
        n = min(self.order, o.order)
        a, b = self.coeffs, o.coeffs
        out = []
        for k in range(n + 1):
            s = mpq(0)
            for i in range(k + 1):
                if a[i] and b[k - i]:
                    s += a[i] * b[k - i]
            out.append(s)
        return TruncatedSeries(out)

    __rmul__ = __mul__

    def scale(self, c) -> "TruncatedSeries":
        c = rat(c)
        return TruncatedSeries(c * x for x in self.coeffs)

    def inverse(self) -> "TruncatedSeries":
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("series with zero constant term is not a unit")
        inv = [1 / c0]
        for k in range(1, self.order + 1):
            s = mpq(0)
            for i in range(1, k + 1):
                s += self.coeffs[i] * inv[k - i]
            inv.append(-s / c0)
        return TruncatedSeries(inv)

    def __truediv__(self, other):
        if not isinstance(other, (TruncatedSeries, Poly)):
            return self.scale(1 / rat(other))
        return self * self._other(other).inverse()

    def rescale(self, g) -> "TruncatedSeries":
        """f(g x)."""
        g = rat(g)
        out, gp = [], mpq(1)
        for c in self.coeffs:
            out.append(c * gp)
            gp *= g
        return TruncatedSeries(out)

    def shift(self, k: int) -> "TruncatedSeries":
        """x^k f(x) for k >= 0, keeping the order."""
        if k < 0:
            raise ValueError("use LaurentSeries for negative shifts")
        return TruncatedSeries([0] * k + list(self.coeffs[: self.order + 1 - k]), self.order)

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs[: order + 1], order)

    def first_nonzero(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def is_zero(self) -> bool:
        return self.first_nonzero() is None

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return self.coeffs[: n + 1] == other.coeffs[: n + 1]

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:4])
        return f"TruncatedSeries([{head}, ...], order={self.order})"


def series_mul(s: TruncatedSeries, t: TruncatedSeries) -> TruncatedSeries:
    return s * t


def series_div(s: TruncatedSeries, t: TruncatedSeries) -> TruncatedSeries:
    return s / t


def series_scale(s: TruncatedSeries, c) -> TruncatedSeries:
    return s.scale(c)


class LaurentSeries:
    """sum_{e=val}^{prec-1} c_e t^e + O(t^prec).

    ``coeffs[i]`` is the coefficient of t^(val + i); ``prec`` is absolute.
    """

    __slots__ = ("val", "coeffs")

    def __init__(self, val: int, coeffs: Iterable, prec: int | None = None):
        cs = [rat(c) for c in coeffs]
        if prec is not None:
            n = prec - val
            if n < 0:
                raise ValueError("precision below valuation")
            cs = (cs + [mpq(0)] * (n - len(cs)))[:n]
        self.val = val
        self.coeffs: tuple = tuple(cs)

    @property
    def prec(self) -> int:
        return self.val + len(self.coeffs)

    @classmethod
    def from_series(cls, s: TruncatedSeries, val: int = 0) -> "LaurentSeries":
        return cls(val, s.coeffs)

    @classmethod
    def from_poly(cls, p: Poly, prec: int) -> "LaurentSeries":
        return cls(0, p.coeffs, prec)

    @classmethod
    def monomial(cls, e: int, c, prec: int) -> "LaurentSeries":
        return cls(e, [c], prec)

    def coeff(self, e: int) -> mpq:
        i = e - self.val
        if e >= self.prec:
            raise IndexError(f"t^{e} lies beyond the precision {self.prec}")
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else mpq(0)

    def normalized(self) -> "LaurentSeries":
        cs = list(self.coeffs)
        v = self.val
        while cs and cs[0] == 0:
            cs.pop(0)
            v += 1
        if not cs:
            return LaurentSeries(self.prec, [])
        return LaurentSeries(v, cs)

    def _lift(self, other) -> "LaurentSeries":
        if isinstance(other, LaurentSeries):
            return other
        return LaurentSeries(0, [other], max(self.prec, 1))

    def __add__(self, other):
        o = self._lift(other)
        v = min(self.val, o.val)
        p = min(self.prec, o.prec)
        if p < v:
            return LaurentSeries(p, [])
        return LaurentSeries(v, [self._get(e) + o._get(e) for e in range(v, p)])

    __radd__ = __add__

    def _get(self, e):
        i = e - self.val
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else mpq(0)

    def __neg__(self):
        return LaurentSeries(self.val, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "LaurentSeries":
        c = rat(c)
        return LaurentSeries(self.val, [c * x for x in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        a, b = self.normalized(), other.normalized()
        n = min(len(a.coeffs), len(b.coeffs))
        out = []
        for k in range(n):
            s = mpq(0)
            for i in range(k + 1):
                if a.coeffs[i] and b.coeffs[k - i]:
                    s += a.coeffs[i] * b.coeffs[k - i]
            out.append(s)
        if n == 0:
            return LaurentSeries(min(a.val + b.prec, b.val + a.prec), [])
        return LaurentSeries(a.val + b.val, out)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentSeries":
        a = self.normalized()
        if not a.coeffs:
            raise ZeroDivisionError("cannot invert a series known to be O(t^prec)")
        s = TruncatedSeries(a.coeffs).inverse()
        return LaurentSeries(-a.val, s.coeffs)

    def __truediv__(self, other):
        if not isinstance(other, LaurentSeries):
            return self.scale(1 / rat(other))
        return self * other.inverse()

    def shift(self, k: int) -> "LaurentSeries":
        """t^k f(t)."""
        return LaurentSeries(self.val + k, self.coeffs)

    def rescale(self, g) -> "LaurentSeries":
        """f(g t)."""
        g = rat(g)
        return LaurentSeries(self.val, [c * qpow(g, self.val + i) for i, c in enumerate(self.coeffs)])

    def truncate(self, prec: int) -> "LaurentSeries":
        if prec >= self.prec:
            return self
        return LaurentSeries(self.val, self.coeffs[: max(prec - self.val, 0)])

    def compare(self, other: "LaurentSeries") -> tuple[bool, int | None, int]:
        """(agree, first differing exponent, exponents checked below this)."""
        o = self._lift(other)
        p = min(self.prec, o.prec)
        v = min(self.val, o.val)
        for e in range(v, p):
            if self._get(e) != o._get(e):
                return False, e, p
        return True, None, p

    def __repr__(self):
        return f"LaurentSeries(val={self.val}, prec={self.prec}, head={[str(c) for c in self.coeffs[:3]]})"


def laurent_from_rational(f: RationalFunction, prec: int, kappa=None) -> LaurentSeries:
    """Expand a rational function of x as a Laurent series.

    With ``kappa`` given, the expansion variable is w with x = kappa / w, i.e.
    around x = infinity.
    """
    pad = prec + f.num.degree + f.den.degree + 2
    if kappa is None:
        num = LaurentSeries(0, f.num.coeffs, max(pad, 1))
        den = LaurentSeries(0, f.den.coeffs, max(pad, 1))
    else:
        kappa = rat(kappa)
        num = _poly_in_inverse(f.num, kappa, pad)
        den = _poly_in_inverse(f.den, kappa, pad)
    return (num / den).truncate(prec)


def _poly_in_inverse(p: Poly, kappa: mpq, prec: int) -> LaurentSeries:
    if p.is_zero():
        return LaurentSeries(prec, [])
    d = p.degree
    coeffs = [p[d - i] * kappa ** (d - i) for i in range(d + 1)]
    return LaurentSeries(-d, coeffs, max(prec, -d + 1))


# ---------------------------------------------------------------------------
# hypergeometric terms


@dataclass(frozen=True)
class PhiSpec:
    """Parameters of r+1 phi r (top; bottom; q, argument).

    For series in an indeterminate the ``argument`` is the scale g in g*x.
    """

    top: tuple
    bottom: tuple
    q: mpq
    argument: mpq = field(default_factory=lambda: mpq(1))

    def __post_init__(self):
        object.__setattr__(self, "top", tuple(rat(t) for t in self.top))
        object.__setattr__(self, "bottom", tuple(rat(t) for t in self.bottom))
        object.__setattr__(self, "q", rat(self.q))
        object.__setattr__(self, "argument", rat(self.argument))


def phi21(a, b, c, q, argument=1) -> PhiSpec:
    return PhiSpec((a, b), (c,), q, argument)


def _ratio_factor(nums, dens, qi, g):
    num = g
    for a in nums:
        num *= 1 - a * qi
    den = mpq(1)
    for b in dens:
        den *= 1 - b * qi
    return num, den


def hypergeometric_coefficients(nums: Sequence, dens: Sequence, q, g, n_terms: int) -> list:
    """t_0 = 1 and t_{i+1} = t_i g prod(1 - n q^i) / prod(1 - d q^i), exactly."""
    q, g = rat(q), rat(g)
    nums = [rat(a) for a in nums]
    dens = [rat(b) for b in dens]
    out = [mpq(1)]
    t = mpq(1)
    qi = mpq(1)
    for i in range(n_terms - 1):
        if t:
            num, den = _ratio_factor(nums, dens, qi, g)
            if den == 0:
                if num == 0:
                    t = mpq(0)
                else:
                    raise NonGenericError(f"vanishing denominator factor at index {i}")
            else:
                t = t * num / den
        out.append(t)
        qi *= q
    return out


def phi_series_in_x(spec: PhiSpec, N: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Coefficients of x^i, i <= N, in phi(top; bottom; q, g x)."""
    dens = list(spec.bottom) + [spec.q]
    return TruncatedSeries(hypergeometric_coefficients(spec.top, dens, spec.q, spec.argument, N + 1))


def phi21_series(a, b, c, q, g=1, N: int = DEFAULT_ORDER) -> TruncatedSeries:
    return phi_series_in_x(phi21(a, b, c, q, g), N)


def _termination(nums, q) -> int | None:
    lens = [L for L in (terminating_length(a, q) for a in nums) if L is not None]
    return min(lens) if lens else None


def hyper_sum(t0, g, nums: Sequence, dens: Sequence, q, eps=DEFAULT_EPS,
              prec: int | None = None) -> BoundedValue:
    """Certified sum of t_0 + t_1 + ... with the ratio of ``hypergeometric_coefficients``.

    Terminating sums (a numerator factor hits zero) with exact t_0 are
    summed exactly.  Otherwise the partial sum stops once the geometric
    majorant of the tail, built from a ratio bound valid for every later
    index, is below eps/2.
    """
    q, g, eps = rat(q), rat(g), rat(eps)
    nums = [rat(a) for a in nums]
    dens = [rat(b) for b in dens]
    prec = prec or prec_for(eps)
    L = _termination(nums, q)
    if g == 0:
        L = 0
    if L is not None and not isinstance(t0, BoundedValue):
        total = t = rat(t0)
        qi = mpq(1)
        for i in range(L):
            num, den = _ratio_factor(nums, dens, qi, g)
            if den == 0:
                raise NonGenericError(f"vanishing denominator factor at index {i}")
            t = t * num / den
            total += t
            qi *= q
        return BoundedValue(total, mpq(0), prec)
    t = as_bounded(t0, prec)
    total = t
    if L is not None:
        qi = mpq(1)
        for i in range(L):
            num, den = _ratio_factor(nums, dens, qi, g)
            if den == 0:
                raise NonGenericError(f"vanishing denominator factor at index {i}")
            t = t * (num / den)
            total = total + t
            qi *= q
        return total
    if not abs(g) < 1:
        raise ValueError(f"non-terminating series with |argument| = {float(abs(g))} >= 1 diverges")
    qi = mpq(1)
    for i in range(MAX_TERMS):
        # bound on |t_{j+1}/t_j| for all j >= i
        bound = None
        if all(abs(b) * abs(qi) < 1 for b in dens):
            bound = abs(g)
            for a in nums:
                bound *= 1 + abs(a) * abs(qi)
            for b in dens:
                bound /= 1 - abs(b) * abs(qi)
        if bound is not None and bound < 1:
            tail = t.magnitude / (1 - bound)
            if tail <= eps / 2:
                return BoundedValue(total.value, total.error_bound + tail, prec) + 0
        num, den = _ratio_factor(nums, dens, qi, g)
        if den == 0:
            raise NonGenericError(f"vanishing denominator factor at index {i}")
        t = t * (num / den)
        total = total + t
        qi *= q
    raise RuntimeError("series did not reach the requested tolerance")


def phi_value(spec: PhiSpec, eps=DEFAULT_EPS) -> BoundedValue:
    """Value of phi(top; bottom; q, argument) with a certified error <= eps."""
    dens = list(spec.bottom) + [spec.q]
    return hyper_sum(mpq(1), spec.argument, spec.top, dens, spec.q, eps)


def phi_terminating(top: Sequence, bottom: Sequence, arg, q) -> mpq:
    """Exact value of a terminating series; some top parameter must be q^{-j}."""
    q = rat(q)
    L = _termination([rat(t) for t in top], q)
    if L is None:
        raise ValueError("series does not terminate")
    return hyper_sum(mpq(1), arg, top, list(bottom) + [q], q).value


def phi4_3_terminating(j: int, b_params: Sequence, c_params: Sequence, arg, q) -> mpq:
    """4phi3(q^{-j}, b1, b2, b3; c1, c2, c3; q, arg): the exact sum of j + 1 terms."""
    if j < 0:
        raise ValueError("j must be non-negative")
    q, arg = rat(q), rat(arg)
    top = [qpow(q, -j)] + [rat(b) for b in b_params]
    dens = [rat(c) for c in c_params] + [q]
    total = t = mpq(1)
    qi = mpq(1)
    for i in range(j):
        num, den = _ratio_factor(top, dens, qi, arg)
        if den == 0:
            raise NonGenericError(f"vanishing denominator factor at index {i}")
        t = t * num / den
        total += t
        qi *= q
    return total


def phi_tilde_2_1(a, b, c, q, N: int = DEFAULT_ORDER, eps=DEFAULT_EPS):
    """(prefactor, series) of (q)_inf (c)_inf / ((a)_inf (b)_inf) * 2phi1(a, b; c; q, x)."""
    q = rat(q)
    e = rat(eps) / 16
    pre = qpoch_inf(q, q, e) * qpoch_inf(c, q, e) / (qpoch_inf(a, q, e) * qpoch_inf(b, q, e))
    return pre, phi21_series(a, b, c, q, 1, N)


# ---------------------------------------------------------------------------
# infinite products in x


def qpoch_inf_series(z, q, N: int = DEFAULT_ORDER) -> TruncatedSeries:
    """(z x; q)_inf = sum_n (-1)^n q^{n(n-1)/2} z^n / (q)_n x^n."""
    z, q = rat(z), rat(q)
    out = [mpq(1)]
    t = mpq(1)
    for n in range(N):
        t = t * (-z) * qpow(q, n) / (1 - qpow(q, n + 1))
        out.append(t)
    return TruncatedSeries(out)


def rqpoch_inf_series(z, q, N: int = DEFAULT_ORDER) -> TruncatedSeries:
    """1 / (z x; q)_inf = sum_n z^n / (q)_n x^n."""
    z, q = rat(z), rat(q)
    out = [mpq(1)]
    t = mpq(1)
    for n in range(N):
        t = t * z / (1 - qpow(q, n + 1))
        out.append(t)
    return TruncatedSeries(out)


def qpoch_ratio_series(num: Iterable, den: Iterable, q, N: int = DEFAULT_ORDER) -> TruncatedSeries:
    """prod (n_i x)_inf / prod (d_j x)_inf as a series in x."""
    out = TruncatedSeries.one(N)
    for z in num:
        out = out * qpoch_inf_series(z, q, N)
    for z in den:
        out = out * rqpoch_inf_series(z, q, N)
    return out


def finite_product_series(z, n: int, q, N: int = DEFAULT_ORDER) -> TruncatedSeries:
    """(z x; q)_n, any integer n, as a series in x."""
    z, q = rat(z), rat(q)
    if n >= 0:
        p = Poly.const(1)
        for j in range(n):
            p = p * Poly([1, -z * qpow(q, j)])
        return TruncatedSeries.from_poly(p, N)
    return finite_product_series(z * qpow(q, n), -n, q, N).inverse()


# ---------------------------------------------------------------------------
# multiple series


@dataclass(frozen=True)
class MultiPhiDSpec:
    """Parameters of the multiple series phi_D(a; b_1..b_r; c; x_1..x_r)."""

    a: mpq
    b_list: tuple
    c: mpq
    x_list: tuple
    q: mpq

    def __post_init__(self):
        object.__setattr__(self, "a", rat(self.a))
        object.__setattr__(self, "c", rat(self.c))
        object.__setattr__(self, "q", rat(self.q))
        object.__setattr__(self, "b_list", tuple(rat(b) for b in self.b_list))
        object.__setattr__(self, "x_list", tuple(rat(x) for x in self.x_list))
        if len(self.b_list) != len(self.x_list):
            raise ValueError("b_list and x_list must have the same length")


def _sup_ratio(alpha: mpq, beta: mpq, q: mpq) -> mpq:
    """Rigorous sup_n |(alpha)_n / (beta)_n| over n >= 0."""
    aq = abs(q)
    n0 = 0
    s = mpq(1)
    best = mpq(1)
    pa, pb = abs(alpha), abs(beta)
    while True:
        sa = pa / (1 - aq)
        sb = pb / (1 - aq)
        if sa <= mpq(1, 2) and sb <= mpq(1, 2):
            return max(best, s / ((1 - sa) * (1 - sb)))
        d = 1 - beta * qpow(q, n0)
        if d == 0:
            raise NonGenericError("vanishing denominator in multiple series")
        s = s * abs(1 - alpha * qpow(q, n0)) / abs(d)
        best = max(best, s)
        n0 += 1
        pa *= aq
        pb *= aq


def _index_plan(b_list, x_list, q):
    """Per index: a fixed upper limit (terminating) or None (infinite)."""
    plan = []
    for b, x in zip(b_list, x_list):
        if x == 0:
            plan.append(0)
            continue
        L = terminating_length(b, q)
        plan.append(L)
    return plan


def _factor_tables(b_list, x_list, q, limits):
    tables = []
    for b, x, L in zip(b_list, x_list, limits):
        tbl = [mpq(1)]
        t = mpq(1)
        for i in range(L):
            t = t * (1 - b * qpow(q, i)) * x / (1 - qpow(q, i + 1))
            tbl.append(t)
        tables.append(tbl)
    return tables


def _multi_sum(weight: Callable[[int], object], weight_sup: mpq, spec_b, spec_x, q, eps,
               caps, total_limit: int | None, prec: int) -> BoundedValue:
    plan = _index_plan(spec_b, spec_x, q)
    infinite = [i for i, L in enumerate(plan) if L is None]
    if total_limit is not None:
        limits = [total_limit if L is None else min(L, total_limit) for L in plan]
        tail = mpq(0)
    else:
        for i in infinite:
            if not abs(spec_x[i]) < 1:
                raise ValueError("non-terminating index with |x| >= 1 diverges")
        fixed = {}
        for i, L in enumerate(plan):
            if L is not None:
                tbl = _factor_tables([spec_b[i]], [spec_x[i]], q, [L])[0]
                fixed[i] = sum(abs(t) for t in tbl)
        sups = {i: _sup_ratio(spec_b[i], q, q) for i in infinite}

        def tail_bound(cap_map):
            full = box = mpq(1)
            for i in infinite:
                ax = abs(spec_x[i])
                full *= sups[i] / (1 - ax)
                box *= sups[i] * (1 - ax ** (cap_map[i] + 1)) / (1 - ax)
            base = weight_sup
            for v in fixed.values():
                base *= v
            return base * (full - box)

        if caps is None:
            cap = 4
            while tail_bound({i: cap for i in infinite}) > eps / 2:
                cap += 4
                if cap > 5000:
                    raise RuntimeError("multiple series converges too slowly")
            cap_map = {i: cap for i in infinite}
        else:
            cap_map = {i: caps[i] for i in infinite}
        tail = tail_bound(cap_map) if infinite else mpq(0)
        limits = [cap_map[i] if L is None else L for i, L in enumerate(plan)]
    tables = _factor_tables(spec_b, spec_x, q, limits)
    exact = all(not isinstance(weight(0), BoundedValue) for _ in [0])
    acc_exact = mpq(0)
    acc = as_bounded(0, prec)
    for idx in itertools.product(*(range(L + 1) for L in limits)):
        n = sum(idx)
        if total_limit is not None and n > total_limit:
            continue
        f = mpq(1)
        for tbl, i in zip(tables, idx):
            f *= tbl[i]
        if not f:
            continue
        w = weight(n)
        if isinstance(w, BoundedValue):
            exact = False
            acc = acc + w * f
        else:
            acc_exact += w * f
    out = acc + acc_exact if not exact else BoundedValue(acc_exact, mpq(0), prec)
    if tail:
        out = BoundedValue(out.value, out.error_bound + tail, prec) + 0
    return out


def phi_D(spec: MultiPhiDSpec, eps=DEFAULT_EPS, caps: Sequence[int] | None = None) -> BoundedValue:
    """Andrews' q-Lauricella series phi_D; exact (error 0) when every index terminates."""
    q, a, c = spec.q, spec.a, spec.c
    eps = rat(eps)
    prec = prec_for(eps)
    La = terminating_length(a, q)
    if terminating_length(c, q) is not None and (La is None or terminating_length(c, q) < La):
        raise NonGenericError("denominator parameter c is a non-positive power of q")
    cache = {0: mpq(1)}

    def weight(n):
        if n not in cache:
            m = max(cache)
            w = cache[m]
            for i in range(m, n):
                w = w * (1 - a * qpow(q, i)) / (1 - c * qpow(q, i))
                cache[i + 1] = w
        return cache[n]

    sup = mpq(0) if La is not None else _sup_ratio(a, c, q)
    return _multi_sum(weight, sup, spec.b_list, spec.x_list, q, eps, caps, La, prec)


def phi_D_tilde(spec: MultiPhiDSpec, eps=DEFAULT_EPS, caps: Sequence[int] | None = None) -> BoundedValue:
    """(c)_inf/(a)_inf phi_D, summed with weights (c q^n)_inf / (a q^n)_inf.

    This form stays meaningful when c is a non-positive power of q.
    """
    q, a, c = spec.q, spec.a, spec.c
    eps = rat(eps)
    prec = prec_for(eps)
    if terminating_length(a, q) is not None:
        raise NonGenericError("first parameter a must avoid non-positive powers of q")
    aq = abs(q)
    n0 = 0
    while abs(a) * aq ** n0 / (1 - aq) > mpq(1, 4) or abs(c) * aq ** n0 / (1 - aq) > mpq(1, 4):
        n0 += 1
    inner = eps * mpq(1, 2 ** 40)
    f0 = qpoch_inf(c * qpow(q, n0), q, inner) / qpoch_inf(a * qpow(q, n0), q, inner)
    cache = {n0: f0}
    for n in range(n0 - 1, -1, -1):
        cache[n] = cache[n + 1] * (1 - c * qpow(q, n)) / (1 - a * qpow(q, n))
    sa = abs(a) * aq ** n0 / (1 - aq)
    sc = abs(c) * aq ** n0 / (1 - aq)
    sup = (1 + 2 * sc) / (1 - sa)
    for n in range(n0 + 1):
        sup = max(sup, cache[n].magnitude)

    def weight(n):
        if n not in cache:
            m = max(cache)
            w = cache[m]
            for i in range(m, n):
                w = w * (1 - a * qpow(q, i)) / (1 - c * qpow(q, i))
                cache[i + 1] = w
        return cache[n]

    return _multi_sum(weight, sup, spec.b_list, spec.x_list, q, eps, caps, None, prec)


# ---------------------------------------------------------------------------
# series identities


def product_formula_check(a, b, c, d, e, f, g, h, q, N: int = 25) -> dict:
    """Product of two 2phi1 series against its 4phi3 coefficient expansion.

    The coefficient of x^j on the expansion side is written as a polynomial
    in g so that g = 0 needs no special case.
    """
    a, b, c, d, e, f, g, h, q = map(rat, (a, b, c, d, e, f, g, h, q))
    lhs = phi21_series(a, b, c, q, g, N) * phi21_series(d, e, f, q, h, N)
    pref = hypergeometric_coefficients([a, b], [c, q], q, 1, N + 1)
    z = q * c * h / (a * b)
    rhs = []
    for j in range(N + 1):
        top = [qpow(q, -j), qpow(q, 1 - j) / c, d, e]
        bot = [qpow(q, 1 - j) / a, qpow(q, 1 - j) / b, f, q]
        terms = hypergeometric_coefficients(top, bot, q, 1, j + 1)
        s = sum((t * z ** i * g ** (j - i) for i, t in enumerate(terms)), mpq(0))
        rhs.append(pref[j] * s)
    resid = lhs - TruncatedSeries(rhs)
    bad = resid.first_nonzero()
    return {"identity_id": "product_formula", "passed": bad is None,
            "order": N, "first_mismatch": bad}


def heine_check(a, b, c, q, N: int = DEFAULT_ORDER) -> dict:
    """(x)_inf 2phi1(a,b;c;x) = (abx/c)_inf 2phi1(c/a, c/b; c; abx/c), coefficient-wise."""
    a, b, c, q = map(rat, (a, b, c, q))
    lhs = qpoch_inf_series(1, q, N) * phi21_series(a, b, c, q, 1, N)
    rhs = qpoch_inf_series(a * b / c, q, N) * phi21_series(c / a, c / b, c, q, a * b / c, N)
    bad = (lhs - rhs).first_nonzero()
    return {"identity_id": "heine_q_euler", "passed": bad is None, "order": N, "first_mismatch": bad}


def qbinomial_finite_check(n: int, q) -> bool:
    """sum_{i<=n} (q^{-n})_i/(q)_i x^i == (x q^{-n}; q)_n as polynomials."""
    q = rat(q)
    lhs = Poly(hypergeometric_coefficients([qpow(q, -n)], [q], q, 1, n + 1))
    rhs = Poly.const(1)
    for j in range(n):
        rhs = rhs * Poly([1, -qpow(q, j - n)])
    return lhs == rhs


def qbinomial_series_check(a, q, N: int = 20) -> bool:
    """1phi0(a; -; q, x) against (a x)_inf / (x)_inf."""
    a, q = rat(a), rat(q)
    lhs = phi_series_in_x(PhiSpec((a,), (), q, 1), N)
    rhs = qpoch_inf_series(a, q, N) * rqpoch_inf_series(1, q, N)
    return lhs == rhs

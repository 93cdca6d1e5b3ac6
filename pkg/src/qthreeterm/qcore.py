"""Exact rational kernel: q-shifted factorials, certified infinite products,
genericity of parameter points.

All scalars are ``gmpy2.mpq``.  Anything that cannot be exact (infinite
products, non-terminating sums) is carried as a :class:`BoundedValue`, a
rational centre with a rigorous absolute error radius.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

import gmpy2
from gmpy2 import mpq, mpz

Rational = Union[int, Fraction, str, "mpq"]

#: bits kept in the centre of a rounded BoundedValue
DEFAULT_PREC = 192
DEFAULT_WINDOW = 12


class NonGenericError(ZeroDivisionError):
    """A denominator vanished: the parameter point is not generic enough."""


def rat(x: Rational) -> mpq:
    """Coerce ints, Fractions, mpq and strings like ``"3/7"`` or ``"1e-25"``."""
    if isinstance(x, type(mpq())):
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            n, d = s.split("/")
            return mpq(int(n), int(d))
        f = Fraction(s)
        return mpq(f.numerator, f.denominator)
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass a Fraction or a string")
    return mpq(x)


def rat_str(x) -> str:
    """Serialise a rational as ``"num/den"`` (integers too, e.g. ``"3/1"``)."""
    x = rat(x)
    return f"{x.numerator}/{x.denominator}"


def qpow(q: mpq, n: int) -> mpq:
    if n >= 0:
        return q ** n
    if q == 0:
        raise NonGenericError("negative power of q = 0")
    return (1 / q) ** (-n)


# ---------------------------------------------------------------------------
# finite q-shifted factorials


def qpoch(z: Rational, n: int, q: Rational) -> mpq:
    """(z; q)_n for any integer n.

    For n < 0 this is 1 / (z q^n; q)_{-n}; :class:`NonGenericError` is raised
    when that product vanishes.
    """
    z, q = rat(z), rat(q)
    if n >= 0:
        p = mpq(1)
        t = z
        for _ in range(n):
            p *= 1 - t
            t *= q
        return p
    d = rqpoch(z, n, q)
    if d == 0:
        raise NonGenericError(f"({z}; q)_{n} is infinite")
    return 1 / d


def rqpoch(z: Rational, n: int, q: Rational) -> mpq:
    """1 / (z; q)_n.

    Always finite for n < 0, where it is the polynomial (z q^n; q)_{-n}; in
    particular 1/(q; q)_n = 0 for every negative n.
    """
    z, q = rat(z), rat(q)
    if n >= 0:
        p = qpoch(z, n, q)
        if p == 0:
            raise NonGenericError(f"({z}; q)_{n} vanishes")
        return 1 / p
    p = mpq(1)
    t = z * qpow(q, n)
    for _ in range(-n):
        p *= 1 - t
        t *= q
    return p


def terminating_length(z: mpq, q: mpq, limit: int = 100000) -> int | None:
    """Smallest i >= 0 with z q^i == 1, i.e. z = q^{-i}; None if there is none."""
    if z == 0 or q == 0:
        return 0 if z == 1 else None
    t = z
    for i in range(limit):
        if t == 1:
            return i
        if abs(t) < 1 and abs(q) < 1:
            return None
        t *= q
    return None


# ---------------------------------------------------------------------------
# certified values


def _round_to(x: mpq, prec: int) -> mpq:
    if x.denominator.bit_length() <= prec:
        return x
    scale = mpz(1) << prec
    num = x.numerator * scale
    k = num // x.denominator
    if 2 * (num - k * x.denominator) >= x.denominator:
        k += 1
    return mpq(k, scale)


def _round_up(x: mpq, prec: int) -> mpq:
    if x.denominator.bit_length() <= prec:
        return x
    scale = mpz(1) << prec
    num = x.numerator * scale
    k = -((-num) // x.denominator)
    return mpq(k, scale)


@dataclass(frozen=True)
class BoundedValue:
    """A rational ``value`` with a rigorous absolute ``error_bound``.

    The true quantity lies in ``[value - error_bound, value + error_bound]``.
    Arithmetic propagates the radius and rounds the centre to ``prec`` bits,
    charging the rounding to the radius.
    """

    value: mpq
    error_bound: mpq = field(default_factory=mpq)
    prec: int = DEFAULT_PREC

    def __post_init__(self):
        object.__setattr__(self, "value", rat(self.value))
        object.__setattr__(self, "error_bound", rat(self.error_bound))
        if self.error_bound < 0:
            raise ValueError("error_bound must be non-negative")

    @classmethod
    def exact(cls, x: Rational, prec: int = DEFAULT_PREC) -> "BoundedValue":
        return cls(rat(x), mpq(0), prec)

    @property
    def is_exact(self) -> bool:
        return self.error_bound == 0

    @property
    def magnitude(self) -> mpq:
        """Upper bound on the absolute value."""
        return abs(self.value) + self.error_bound

    def contains(self, x) -> bool:
        if isinstance(x, BoundedValue):
            return abs(x.value - self.value) + x.error_bound <= self.error_bound
        return abs(rat(x) - self.value) <= self.error_bound

    def overlaps(self, other: "BoundedValue") -> bool:
        return abs(self.value - other.value) <= self.error_bound + other.error_bound

    def _make(self, value: mpq, err: mpq, prec: int) -> "BoundedValue":
        r = _round_to(value, prec)
        err = err + abs(r - value)
        if err:
            err = _round_up(err, prec)
        return BoundedValue(r, err, prec)

    def _lift(self, other) -> "BoundedValue":
        if isinstance(other, BoundedValue):
            return other
        return BoundedValue(rat(other), mpq(0), self.prec)

    def __add__(self, other):
        o = self._lift(other)
        p = max(self.prec, o.prec)
        return self._make(self.value + o.value, self.error_bound + o.error_bound, p)

    __radd__ = __add__

    def __neg__(self):
        return BoundedValue(-self.value, self.error_bound, self.prec)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        p = max(self.prec, o.prec)
        err = (abs(self.value) * o.error_bound + abs(o.value) * self.error_bound
               + self.error_bound * o.error_bound)
        return self._make(self.value * o.value, err, p)

    __rmul__ = __mul__

    def reciprocal(self) -> "BoundedValue":
        c, r = self.value, self.error_bound
        if abs(c) <= r:
            raise NonGenericError("reciprocal of an interval containing 0")
        err = r / (abs(c) * (abs(c) - r)) if r else mpq(0)
        return self._make(1 / c, err, self.prec)

    def __truediv__(self, other):
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def __repr__(self):
        return f"BoundedValue({float(self.value):.17g} ± {float(self.error_bound):.3g})"


def as_bounded(x, prec: int = DEFAULT_PREC) -> BoundedValue:
    if isinstance(x, BoundedValue):
        return x
    return BoundedValue(rat(x), mpq(0), prec)


def prec_for(eps: Rational) -> int:
    """Working precision adequate for a target absolute error ``eps``."""
    eps = rat(eps)
    return max(DEFAULT_PREC, int(gmpy2.ceil(gmpy2.log2(1 / eps))) + 96)


def qpoch_inf(z: Rational, q: Rational, eps: Rational = mpq(1, 10 ** 30)) -> BoundedValue:
    """(z; q)_inf with a certified error of at most ``eps``.

    The number of factors J is chosen from the bound
    |prod_{j>=J}(1 - z q^j) - 1| <= S/(1 - S),  S = |z||q|^J / (1 - |q|).
    """
    z, q, eps = rat(z), rat(q), rat(eps)
    prec = prec_for(eps)
    if z == 0:
        return BoundedValue(mpq(1), mpq(0), prec)
    if q == 0:
        return BoundedValue(1 - z, mpq(0), prec)
    if not abs(q) < 1:
        raise ValueError("|q| < 1 is required")
    if terminating_length(z, q) is not None:
        return BoundedValue(mpq(0), mpq(0), prec)
    aq = abs(q)
    p = BoundedValue(mpq(1), mpq(0), prec)
    t = z
    while True:
        s = abs(t) / (1 - aq)
        if s < mpq(1, 2):
            tail = p.magnitude * s / (1 - s)
            if tail + p.error_bound <= eps:
                return BoundedValue(p.value, _round_up(p.error_bound + tail, prec), prec)
        p = p * (1 - t)
        t *= q


def qpoch_ratio_inf(num: Iterable[Rational], den: Iterable[Rational], q: Rational,
                    eps: Rational = mpq(1, 10 ** 30)) -> BoundedValue:
    """prod (n_i; q)_inf / prod (d_j; q)_inf, certified."""
    eps = rat(eps)
    num, den = list(num), list(den)
    share = eps / (8 * (len(num) + len(den) + 1))
    out = as_bounded(1, prec_for(eps))
    for z in num:
        out = out * qpoch_inf(z, q, share)
    for z in den:
        out = out / qpoch_inf(z, q, share)
    return out


# ---------------------------------------------------------------------------
# generic points


@dataclass(frozen=True)
class GenericPoint:
    """Concrete rational values for (q, a, b, c) plus a genericity window K."""

    q: mpq
    a: mpq
    b: mpq
    c: mpq
    window: int = DEFAULT_WINDOW

    def __post_init__(self):
        for name in ("q", "a", "b", "c"):
            object.__setattr__(self, name, rat(getattr(self, name)))
        if not 0 < abs(self.q) < 1:
            raise ValueError("0 < |q| < 1 is required")
        if self.window < 1:
            raise ValueError("window must be positive")

    def quantities(self) -> dict[str, mpq | None]:
        a, b, c = self.a, self.b, self.c
        return {
            "a": a,
            "b": b,
            "c": c,
            "a/b": a / b if b else None,
            "c/a": c / a if a else None,
            "c/b": c / b if b else None,
        }

    def violations(self) -> list[str]:
        """Human-readable list of the genericity clauses that fail."""
        out = []
        powers = {j: qpow(self.q, j) for j in range(-self.window, self.window + 1)}
        for name, v in self.quantities().items():
            if v is None or v == 0:
                out.append(f"{name} = 0 (or undefined)")
                continue
            for j, p in powers.items():
                if v == p:
                    out.append(f"{name} = q^{j}")
        return out

    def is_generic(self) -> bool:
        return not self.violations()

    def shift(self, k: int = 0, l: int = 0, m: int = 0) -> "GenericPoint":
        """(a q^k, b q^l, c q^m) at the same q and window."""
        q = self.q
        return GenericPoint(q, self.a * qpow(q, k), self.b * qpow(q, l),
                            self.c * qpow(q, m), self.window)

    def swapped(self) -> "GenericPoint":
        return GenericPoint(self.q, self.b, self.a, self.c, self.window)

    def as_dict(self) -> dict[str, str]:
        return {"q": rat_str(self.q), "a": rat_str(self.a), "b": rat_str(self.b),
                "c": rat_str(self.c), "window": self.window}


def check_generic(p: GenericPoint) -> bool:
    """True iff none of a, b, c, a/b, c/a, c/b is 0 or q^j with |j| <= window."""
    return p.is_generic()


DEFAULT_POINT = GenericPoint(mpq(3, 7), mpq(2, 5), mpq(3, 11), mpq(5, 13))


# ---------------------------------------------------------------------------
# q-Pochhammer identities


def _identity_cases(z: mpq, q: mpq, i: int, j: int):
    # (a)_i = (a^{-1} q^{1-i})_i (-a)^i q^{i(i-1)/2}
    yield ("reflection", (i,),
           lambda: qpoch(z, i, q),
           lambda: qpoch(qpow(q, 1 - i) / z, i, q) * (-z) ** i * qpow(q, i * (i - 1) // 2))
    # (a)_{i+j} = (a)_i (a q^i)_j
    yield ("split", (i, j),
           lambda: qpoch(z, i + j, q),
           lambda: qpoch(z, i, q) * qpoch(z * qpow(q, i), j, q))
    # (a)_{i-j} = (a)_i / (a^{-1} q^{1-i})_j (-a^{-1})^j q^{j(j+1)/2 - ij}
    yield ("difference", (i, j),
           lambda: qpoch(z, i - j, q),
           lambda: qpoch(z, i, q) * rqpoch(qpow(q, 1 - i) / z, j, q)
           * (-1 / z) ** j * qpow(q, j * (j + 1) // 2 - i * j))


def qpoch_identity_suite(q: Rational, samples: int, seed: int = 0,
                         index_range: tuple[int, int] = (-6, 6)) -> dict:
    """Check the three standard q-Pochhammer manipulations on random data.

    Draws rational z of small height and integer indices in ``index_range``.
    Draws that hit a vanishing denominator are counted as skipped.
    """
    if samples <= 0:
        raise ValueError("samples must be positive")
    q = rat(q)
    rng = random.Random(seed)
    lo, hi = index_range
    checked = skipped = 0
    violations = []
    for _ in range(samples):
        z = mpq(rng.choice([-1, 1]) * rng.randint(1, 40), rng.randint(1, 40))
        i, j = rng.randint(lo, hi), rng.randint(lo, hi)
        for name, idx, lhs, rhs in _identity_cases(z, q, i, j):
            try:
                left, right = lhs(), rhs()
            except NonGenericError:
                skipped += 1
                continue
            checked += 1
            if left != right:
                violations.append({"identity": name, "z": rat_str(z), "indices": list(idx),
                                   "lhs": rat_str(left), "rhs": rat_str(right)})
    return {"checked": checked, "skipped": skipped, "violations": violations}

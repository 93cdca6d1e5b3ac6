"""Dense univariate polynomials and rational functions over the rationals."""
from __future__ import annotations

from typing import Iterable, Sequence

from gmpy2 import mpq

from .qcore import qpow, rat, rat_str


class Poly:
    """Polynomial in x; ``coeffs[i]`` is the coefficient of x^i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple = tuple(cs)

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> mpq:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else mpq(0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other) -> "Poly":
        other = other if isinstance(other, Poly) else Poly.const(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other) -> "Poly":
        other = other if isinstance(other, Poly) else Poly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = rat(other)
            return Poly(c * x for x in self.coeffs)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [mpq(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, x):
        acc = mpq(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def scale_var(self, g) -> "Poly":
        """p(g x)."""
        g = rat(g)
        out, gp = [], mpq(1)
        for c in self.coeffs:
            out.append(c * gp)
            gp *= g
        return Poly(out)

    def reversed_in(self, d: int) -> "Poly":
        """x^d p(1/x); requires deg p <= d."""
        if self.degree > d:
            raise ValueError("degree exceeds reversal length")
        return Poly(self[d - i] for i in range(d + 1))

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.coeffs[-1]
        quo = [mpq(0)] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            f = rem[i] / lead
            if f:
                quo[i - dq] = f
                for j, b in enumerate(other.coeffs):
                    rem[i - dq + j] -= f * b
        return Poly(quo), Poly(rem[:dq])

    def monic(self) -> "Poly":
        return self * (1 / self.coeffs[-1]) if self.coeffs else self

    def valuation(self) -> int:
        """Lowest exponent with a nonzero coefficient (0 for the zero polynomial)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return 0

    def to_json(self) -> list[str]:
        return [rat_str(c) for c in self.coeffs]

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        terms = [f"{rat_str(c)}*x^{i}" for i, c in enumerate(self.coeffs) if c]
        return "Poly(" + " + ".join(terms) + ")"


def poly_gcd(p: Poly, r: Poly) -> Poly:
    while not r.is_zero():
        p, r = r, p.divmod(r)[1]
    return p.monic() if not p.is_zero() else p


class RationalFunction:
    """num(x) / den(x) with exact rational coefficients (not auto-reduced)."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly | Sequence, den: Poly | Sequence | None = None):
        self.num = num if isinstance(num, Poly) else Poly(num)
        if den is None:
            den = Poly.const(1)
        self.den = den if isinstance(den, Poly) else Poly(den)
        if self.den.is_zero():
            raise ZeroDivisionError("zero denominator")

    @classmethod
    def const(cls, c) -> "RationalFunction":
        return cls(Poly.const(c))

    @classmethod
    def x_power(cls, e: int, c=1) -> "RationalFunction":
        """c x^e for any integer e."""
        if e >= 0:
            return cls(Poly.monomial(e, c))
        return cls(Poly.const(c), Poly.monomial(-e))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other) -> "RationalFunction":
        o = _lift(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other) -> "RationalFunction":
        o = _lift(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        o = _lift(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return _lift(other) / self

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def scale_var(self, g) -> "RationalFunction":
        """f(g x)."""
        return RationalFunction(self.num.scale_var(g), self.den.scale_var(g))

    def equals(self, other) -> bool:
        """Equality as rational functions (cross-multiplication)."""
        o = _lift(other)
        return self.num * o.den == o.num * self.den

    def reduced(self) -> "RationalFunction":
        """Cancel the polynomial gcd and make the denominator monic."""
        if self.num.is_zero():
            return RationalFunction(Poly(), Poly.const(1))
        g = poly_gcd(self.num, self.den)
        n, _ = self.num.divmod(g)
        d, _ = self.den.divmod(g)
        lead = d.coeffs[-1]
        return RationalFunction(n * (1 / lead), d * (1 / lead))

    def to_json(self) -> dict:
        r = self.reduced()
        return {"num": r.num.to_json(), "den": r.den.to_json()}

    def __repr__(self):
        return f"RationalFunction({self.num!r} / {self.den!r})"


def _lift(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Poly):
        return RationalFunction(x)
    return RationalFunction.const(x)


def qpoch_x(z, n: int, q) -> RationalFunction:
    """(z x; q)_n as a rational function of x, for any integer n."""
    z, q = rat(z), rat(q)
    if n >= 0:
        p = Poly.const(1)
        for j in range(n):
            p = p * Poly([1, -z * qpow(q, j)])
        return RationalFunction(p)
    d = Poly.const(1)
    for j in range(1, -n + 1):
        d = d * Poly([1, -z * qpow(q, -j)])
    return RationalFunction(Poly.const(1), d)

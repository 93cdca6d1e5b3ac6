# %% [markdown]
# Three-term relations for 2phi1
#
# For a shift (k, l, m, n) the series 2phi1(aq^k, bq^l; cq^m; q, xq^n) is a
# combination Q * 2phi1(aq, bq; cq; x) + R * 2phi1(a, b; c; x) with Q, R
# rational in x.  This script computes Q and R at a rational point and
# checks the relation coefficient by coefficient.

# %%
from qthreeterm.qcore import DEFAULT_POINT, rat_str
from qthreeterm.threeterm import (ShiftQuad, compute_P_proposition, compute_P_theorem,
                                  compute_Q, compute_R, verify_three_term)

point = DEFAULT_POINT
print("q, a, b, c =", ", ".join(rat_str(v) for v in (point.q, point.a, point.b, point.c)))

# %% [markdown]
# The polynomial P behind Q has two independent constructions.  They agree
# exactly, and the degree never exceeds d.

# %%
quad = ShiftQuad(2, 3, 1, -1)
p1 = compute_P_theorem(quad, point)
p2 = compute_P_proposition(quad, point)
print(f"d = {quad.d}, degree of P = {p1.degree}, constructions agree: {p1 == p2}")
print("P coefficients:", [rat_str(c) for c in p1.coeffs])

# %%
Q, R = compute_Q(quad, point), compute_R(quad, point)
print("Q numerator degree", Q.num.degree, "denominator degree", Q.den.degree)
print("R numerator degree", R.num.degree, "denominator degree", R.den.degree)

# %% [markdown]
# Clearing denominators turns the relation into a power series identity.
# Every coefficient up to x^40 vanishes.

# %%
for shift in [(2, 3, 1, -1), (1, 1, 0, 0), (-2, 1, 3, 2), (3, -3, 0, 1)]:
    result = verify_three_term(ShiftQuad(*shift), point, 40)
    print(shift, "residual zero through x^40:", result["passed"])

# %% [markdown]
# The identity shifts behave as expected.

# %%
for shift in [(1, 1, 1, 0), (0, 0, 0, 0)]:
    sq = ShiftQuad(*shift)
    print(shift, "Q =", compute_Q(sq, point).to_json(), "R =", compute_R(sq, point).to_json())

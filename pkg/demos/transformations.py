# %% [markdown]
# Transformation and summation formulas, certified
#
# Non-terminating sides are evaluated as enclosures: a partial sum plus a
# rigorous bound on the tail.  Two sides agree when the distance between
# their centres plus both error bounds stays under the tolerance.

# %%
from gmpy2 import mpq

from qthreeterm.qcore import qpoch_inf, rat_str
from qthreeterm.series import heine_check, phi21, phi_value
from qthreeterm.transforms import TransformInstance, verify_sf, verify_tf1, verify_tf2

eps = mpq(1, 10 ** 25)

# %% [markdown]
# The q-binomial theorem as a warm-up: 1phi0(a; ; q, x) = (ax)_inf / (x)_inf.

# %%
q, x = mpq(1, 3), mpq(1, 4)
value = phi_value(phi21(mpq(1, 2), 0, 0, q, x), eps)
print("series value", float(value.value), "+/-", float(value.error_bound))
prod = qpoch_inf(x / 2, q, eps) / qpoch_inf(x, q, eps)
print("product value", float(prod.value), "overlap:", value.overlaps(prod))
print("Heine transformation as series in x:", heine_check(mpq(2, 5), mpq(3, 11), mpq(5, 13), q)["passed"])

# %% [markdown]
# The two generalized transformations at a few sample shapes.

# %%
for m, s, ns in [(0, 0, (1,)), (2, 1, (2, 1)), (-2, 0, (3,))]:
    for variant, check in (("tf1", verify_tf1), ("tf2", verify_tf2)):
        if variant == "tf2" and s > min(ns):
            continue
        rep = check(TransformInstance.sample(m, s, ns, variant), eps)
        print(rep.identity_id, "pass" if rep.passed else "FAIL", "margin", float(rep.margin))

# %% [markdown]
# A terminating summation is settled in exact arithmetic: margin 0.

# %%
inst = TransformInstance(-1, 1, (1,), (mpq(7, 3),), q ** -3, mpq(3, 11), q)
rep = verify_sf("sf3", inst, eps)
print(rep.identity_id, "margin", rat_str(rep.margin))

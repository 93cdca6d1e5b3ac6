# %% [markdown]
# Local solutions and contiguity operators
#
# The q-hypergeometric equation has four tagged local solutions.  Contiguity
# operators move a parameter by a factor q and map each solution to the
# shifted solution up to an explicit scalar.

# %%
from qthreeterm import contiguity as ct
from qthreeterm.qcore import DEFAULT_POINT
from qthreeterm.threeterm import ShiftQuad

point = DEFAULT_POINT
N = 30

# %%
for kind in ct.KINDS:
    print(f"y{kind} annihilated by the equation:", ct.verify_L(kind, point, N)["passed"])

# %% [markdown]
# Each of the eight operators on each solution.

# %%
for op in ct.OPERATORS:
    row = [ct.verify_operator_lemma(op, kind, point, N)["passed"] for kind in ct.KINDS]
    print(op, row)

# %% [markdown]
# Composite shifts built from single steps, and the Casoratians.

# %%
quad = ShiftQuad(2, -1, 1, -2)
print("steps for", quad.as_tuple(), ct.theta_steps(quad))
print("lambda =", ct.theta_lambda(quad, point))
for kind in ct.KINDS:
    print(f"y{kind}", ct.verify_theta_relation(quad, kind, point, N)["passed"])
for pair in ((1, 2), (3, 4)):
    rep = ct.casoratian(pair, point, N)
    print("Casoratian", pair, "series", rep["series_ok"], "scalar", rep["scalar_ok"])

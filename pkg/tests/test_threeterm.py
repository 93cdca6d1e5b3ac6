from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from qthreeterm import threeterm as tt
from qthreeterm.poly import RationalFunction
from qthreeterm.qcore import DEFAULT_POINT, GenericPoint
from qthreeterm.series import phi21_series
from qthreeterm.threeterm import ShiftQuad

P0 = DEFAULT_POINT
q, a, b, c = (Fraction(int(v.numerator), int(v.denominator)) for v in (P0.q, P0.a, P0.b, P0.c))

quads = st.tuples(*[st.integers(-3, 3)] * 4).map(lambda t: ShiftQuad(*t))


def poch(z, n):
    """Independent (z; q)_n on Fractions, negative n through 1/(z q^n; q)_{-n}."""
    out = Fraction(1)
    if n >= 0:
        for j in range(n):
            out *= 1 - z * q ** j
        return out
    for j in range(1, -n + 1):
        out *= 1 - z * q ** (-j)
    return 1 / out


def four_phi_three(j, tops, bots, arg):
    total = Fraction(0)
    for i in range(j + 1):
        num = poch(q ** -j, i)
        den = poch(q, i)
        for t in tops:
            num *= poch(t, i)
        for s in bots:
            den *= poch(s, i)
        total += num / den * arg ** i
    return total


def brute_A(j, quad):
    k, l, m, n = quad
    pref = (-poch(a * q / c, k - m) * poch(b * q / c, l - m) * poch(c, m - j - 1)
            / (poch(q * q / c, -m - 1) * poch(q ** -j, j) * poch(a, k - j) * poch(b, l - j))
            * (c * q ** (m - j - 1)) ** (1 - n))
    return pref * four_phi_three(j, [c * q ** (m - j - 1), a, b],
                                 [c, a * q ** (k - j), b * q ** (l - j)], q ** (1 - n))


def brute_B(j, quad):
    k, l, m, n = quad
    pref = poch(a * q / c, j) * poch(b * q / c, j) / (poch(q, j) * poch(q * q / c, j))
    return pref * four_phi_three(j, [c * q ** (-j - 1), c * q ** (m - k) / a, c * q ** (m - l) / b],
                                 [c * q ** m, c * q ** (-j) / a, c * q ** (-j) / b],
                                 q ** (k + l - m + n + 1))


def F(x):
    return mpq(x.numerator, x.denominator)


# ---------------------------------------------------------------------------
# shift quads


def test_parse_and_str_roundtrip():
    sq = ShiftQuad.parse("2,-1,1,-2")
    assert sq.as_tuple() == (2, -1, 1, -2)
    assert str(sq) == "(2,-1,1,-2)"


def test_parse_rejects_wrong_arity():
    with pytest.raises(ValueError):
        ShiftQuad.parse("1,2,3")


def test_degree_formula_examples():
    assert ShiftQuad(0, 0, 0, 0).d == -1
    assert ShiftQuad(1, 1, 1, 0).d == 0
    assert ShiftQuad(2, 3, 1, -1).d == 2


def test_grid_size():
    assert len(list(tt.grid(3))) == 7 ** 4


def test_canonical_swaps_k_and_l_with_a_and_b():
    canon, point, swapped = ShiftQuad(3, 1, 0, 0).canonical(P0)
    assert swapped and canon.as_tuple() == (1, 3, 0, 0)
    assert point.a == P0.b and point.b == P0.a


# ---------------------------------------------------------------------------
# coefficient families


def test_negative_index_families_vanish():
    quad = ShiftQuad(0, 1, 0, 0)
    assert tt.coeff_A(-1, quad, P0) == 0
    assert tt.coeff_D(-2, quad, P0) == 0
    for name in (tt.coeff_B, tt.coeff_Atilde, tt.coeff_Btilde, tt.coeff_C, tt.coeff_Ctilde, tt.coeff_Dtilde):
        assert name(-3, quad, P0) == 0


def test_coeff_B_zero_is_one():
    for quad in (ShiftQuad(0, 1, 0, 0), ShiftQuad(1, 2, -1, 3)):
        assert tt.coeff_B(0, quad, P0) == 1


def test_coeff_A_two_against_brute_force():
    assert tt.coeff_A(2, ShiftQuad(0, 1, 0, 0), P0) == F(brute_A(2, (0, 1, 0, 0)))


@pytest.mark.parametrize("quad", [(0, 1, 0, 0), (1, 2, -1, 1), (-2, 1, 2, -1)])
@pytest.mark.parametrize("j", [0, 1, 3])
def test_coeff_A_B_against_brute_force(quad, j):
    sq = ShiftQuad(*quad)
    assert tt.coeff_A(j, sq, P0) == F(brute_A(j, quad))
    assert tt.coeff_B(j, sq, P0) == F(brute_B(j, quad))


def test_coeff_C_zero_is_mu1():
    quad = ShiftQuad(1, 2, 0, 1)
    assert tt.coeff_C(0, quad, P0) == tt.mu1(quad, P0)


def test_mu_at_identity_shift():
    expected = (-(q - c) * a * b / ((b - a) * c) * (a * b / c) * (1 - c) / ((1 - a) * (1 - b)))
    assert tt.mu(ShiftQuad(1, 1, 1, 0), P0) == F(expected)


# ---------------------------------------------------------------------------
# P


def test_P_zero_for_negative_degree():
    assert tt.compute_P_theorem(ShiftQuad(0, 0, 0, 0), P0).is_zero()
    assert tt.compute_P_proposition(ShiftQuad(0, 0, 0, 0), P0).is_zero()


def test_P_at_identity_shift_is_forced_constant():
    expected = -(q - c) * (1 - c) / ((1 - a) * (1 - b) * c)
    P1 = tt.compute_P_theorem(ShiftQuad(1, 1, 1, 0), P0)
    P2 = tt.compute_P_proposition(ShiftQuad(1, 1, 1, 0), P0)
    assert P1.degree == 0 and P1[0] == F(expected)
    assert P2 == P1


def test_P_0100_against_sixty_brute_force_terms():
    # P = sum_j (A_j - B_j) x^j; only the constant survives since d = 0
    quad = (0, 1, 0, 0)
    P = tt.compute_P_theorem(ShiftQuad(*quad), P0)
    assert ShiftQuad(*quad).d == 0
    diffs = [brute_A(j, quad) - brute_B(j, quad) for j in range(60)]
    assert P[0] == F(diffs[0])
    assert all(v == 0 for v in diffs[1:])


def test_P_paths_agree_on_named_quad():
    quad = ShiftQuad(-2, 3, 1, -1)
    assert tt.compute_P_theorem(quad, P0) == tt.compute_P_proposition(quad, P0)


@settings(max_examples=40, deadline=None)
@given(quads)
def test_P_equals_mu_Ptilde_property(quad):
    assert tt.verify_P_equals_mu_Ptilde(quad, P0)["passed"]


@settings(max_examples=40, deadline=None)
@given(quads)
def test_degree_and_leading_coefficient_property(quad):
    canon, point, _ = quad.canonical(P0)
    assert tt.check_leading_coefficient(canon, point)["passed"]


def test_leading_coefficient_equal_shifts():
    quad = ShiftQuad(0, 0, 0, 1)
    assert tt.leading_coefficient(quad, P0) == tt.mu(quad, P0) * (1 / P0.a - 1 / P0.b)


def test_leading_coefficient_unequal_shifts():
    quad = ShiftQuad(0, 1, 0, 0)
    expected = tt.mu(quad, P0) / P0.a * (1 - P0.a / P0.b)
    assert tt.leading_coefficient(quad, P0) == expected


def test_leading_coefficient_rejects_negative_degree():
    with pytest.raises(ValueError):
        tt.leading_coefficient(ShiftQuad(0, 0, 0, 0), P0)


# ---------------------------------------------------------------------------
# Q and R


def test_identity_shift_anchors():
    assert tt.compute_Q(ShiftQuad(1, 1, 1, 0), P0).equals(1)
    assert tt.compute_R(ShiftQuad(1, 1, 1, 0), P0).is_zero()
    assert tt.compute_Q(ShiftQuad(0, 0, 0, 0), P0).is_zero()
    assert tt.compute_R(ShiftQuad(0, 0, 0, 0), P0).equals(1)


@pytest.mark.parametrize("quad", [(1, 1, 1, 0), (0, 0, 0, 1), (1, 1, 0, 0), (2, 2, 1, 0),
                                  (3, -3, 3, -3), (-3, -3, -3, -3), (3, 3, -3, 3)])
def test_three_term_relation(quad):
    assert tt.verify_three_term(ShiftQuad(*quad), P0, 40)["passed"]


@settings(max_examples=30, deadline=None)
@given(quads)
def test_three_term_relation_property(quad):
    assert tt.verify_three_term(quad, P0, 20)["passed"]


def test_three_term_detects_perturbed_Q():
    quad = ShiftQuad(2, 2, 1, 0)
    Q, R = tt.compute_Q(quad, P0), tt.compute_R(quad, P0)
    bad = Q * RationalFunction([1, mpq(1, 10 ** 6)])
    resid = tt.relation_residual(tt.shifted_series(quad, P0, 20), bad, R, P0, 20)
    assert not resid.is_zero()


def test_three_term_at_other_generic_point():
    point = GenericPoint(mpq(-2, 9), mpq(7, 3), mpq(-5, 4), mpq(11, 6))
    for quad in [(1, 2, -1, 2), (-1, 3, 2, -2)]:
        assert tt.verify_three_term(ShiftQuad(*quad), point, 25)["passed"]


@settings(max_examples=30, deadline=None)
@given(quads)
def test_ab_swap_symmetry(quad):
    k, l, m, n = quad.as_tuple()
    Q1 = tt.compute_Q(quad, P0.swapped())
    Q2 = tt.compute_Q(ShiftQuad(l, k, m, n), P0)
    assert Q1.equals(Q2)


def test_corollary_examples():
    for quad in [(1, 1, 1, 0), (0, 0, 0, 0), (2, 3, -1, 1)]:
        assert tt.verify_corollary(ShiftQuad(*quad), P0)["passed"]


def test_corollary_trivial_side_at_identity_shift():
    lhs = tt.compute_Q(ShiftQuad(0, 0, 0, 0), P0.shift(1, 1, 1))
    assert lhs.is_zero()


@settings(max_examples=30, deadline=None)
@given(quads)
def test_corollary_property(quad):
    assert tt.verify_corollary(quad, P0)["passed"]


def test_general_relation_against_reference_shift():
    q1 = ShiftQuad(2, 0, 1, -1)
    Qp, Rp, rep = tt.general_three_term(q1, ShiftQuad(1, 1, 1, 0), P0, 20)
    assert Qp.equals(tt.compute_Q(q1, P0)) and Rp.equals(tt.compute_R(q1, P0))
    assert rep["passed"]


def test_general_relation_same_quad():
    q1 = ShiftQuad(1, 2, 0, 1)
    Qp, Rp, rep = tt.general_three_term(q1, q1, P0, 20)
    assert Qp.equals(1) and Rp.is_zero() and rep["passed"]


def test_general_relation_named_pair():
    _, _, rep = tt.general_three_term(ShiftQuad(2, 0, 1, -1), ShiftQuad(0, 2, -1, 1), P0, 40)
    assert rep["passed"]


def test_general_relation_degenerate_elimination():
    with pytest.raises(ZeroDivisionError):
        tt.general_three_term(ShiftQuad(1, 2, 0, 1), ShiftQuad(0, 0, 0, 0), P0, 10)


@pytest.mark.parametrize("quad", [(1, 2, 0, 1), (-2, 1, 1, -1), (0, 3, 3, 0), (2, 3, 1, -1)])
def test_uniqueness_by_linear_solve(quad):
    assert tt.uniqueness_check(ShiftQuad(*quad), P0)["passed"]


# ---------------------------------------------------------------------------
# product forms and vanishing thresholds


def test_Btilde_series_product_form():
    quad = ShiftQuad(0, 1, 0, 0)
    series = tt.family_series("Bt", quad, P0, 30)
    expected = (phi21_series(P0.a, P0.b * P0.q, P0.c, P0.q, 1, 30)
                * phi21_series(P0.q / P0.a, P0.q / P0.b, P0.q ** 2 / P0.c, P0.q,
                               P0.a * P0.b / P0.c, 30))
    assert series == expected


@pytest.mark.parametrize("quad", [(0, 1, 0, 0), (1, 2, -1, 2), (-1, 2, 2, -1), (0, 0, 0, 0), (1, 3, 0, 0)])
def test_P_product_forms(quad):
    sq = ShiftQuad(*quad)
    assert tt.verify_P_product_form(sq, P0, 20)["passed"]
    assert tt.verify_Ptilde_product_form(sq, P0, 20)["passed"]


def test_vanishing_branch_ii_threshold():
    rep = tt.lemma_vanishing(ShiftQuad(1, 2, 0, -1), P0)
    ab = next(ch for ch in rep["checks"] if ch["statement"] == "AB_ii")
    assert ab["from"] == 2 and ab["to"] == 17 and ab["passed"]


@settings(max_examples=30, deadline=None)
@given(quads)
def test_vanishing_property(quad):
    rep = tt.lemma_vanishing(quad, P0)
    assert rep["checks"] and rep["passed"]


def test_vanishing_fails_below_threshold():
    # starting one index early must expose a nonzero difference
    quad = ShiftQuad(1, 2, 0, -1)
    canon, point, _ = quad.canonical(P0)
    fam = tt.families(canon, point)
    assert fam.get("A", 1) - fam.get("B", 1) != 0

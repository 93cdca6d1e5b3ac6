import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from qthreeterm.qcore import BoundedValue, NonGenericError, qpoch, qpoch_inf, qpow
from qthreeterm.series import (LaurentSeries, MultiPhiDSpec, PhiSpec, TruncatedSeries,
                               heine_check, hyper_sum, phi21, phi21_series, phi4_3_terminating,
                               phi_D, phi_D_tilde, phi_series_in_x, phi_terminating,
                               phi_tilde_2_1, phi_value, product_formula_check,
                               qbinomial_finite_check, qbinomial_series_check, qpoch_inf_series,
                               series_div, series_mul, series_scale)

Q = mpq(3, 7)
A, B, C = mpq(2, 5), mpq(3, 11), mpq(5, 13)
EPS = mpq(1, 10 ** 25)

unit_series = st.lists(st.builds(lambda n, d: mpq(n, d), st.integers(-9, 9), st.integers(1, 9)),
                       min_size=8, max_size=8).map(lambda cs: TruncatedSeries([1] + cs))


def test_one_minus_x_times_geometric_is_one():
    for order in (0, 5, 17):
        prod = TruncatedSeries([1, -1], order) * TruncatedSeries.geometric(order)
        assert prod == TruncatedSeries.one(order)


def test_order_is_min_of_operands():
    s = TruncatedSeries([1, 2, 3, 4], 3)
    t = TruncatedSeries([1, 1], 6)
    assert (s * t).order == 3
    assert (s + t).order == 3


@settings(max_examples=40, deadline=None)
@given(unit_series)
def test_self_division_is_one(s):
    assert series_div(s, s) == TruncatedSeries.one(s.order)


@settings(max_examples=40, deadline=None)
@given(unit_series, unit_series)
def test_division_matches_reciprocal_product(s, t):
    assert series_div(s, t) == series_mul(s, t.inverse())
    assert series_scale(s, 3) == s * 3


def test_division_by_zero_constant_term_rejected():
    with pytest.raises(ZeroDivisionError):
        TruncatedSeries([1, 1]) / TruncatedSeries([0, 1])


def test_laurent_inverse_roundtrip():
    s = LaurentSeries(-2, [mpq(3), 1, mpq(1, 2)], 8)
    one = (s * s.inverse()).normalized()
    ok, first, _ = one.compare(LaurentSeries(0, [1], one.prec))
    assert ok, first


def test_phi21_first_coefficients():
    s = phi21_series(A, B, C, Q, 1, 5)
    assert s[0] == 1
    assert s[1] == (1 - A) * (1 - B) / ((1 - Q) * (1 - C))


def test_phi_series_coefficient_formula():
    spec = PhiSpec((A, B, mpq(7, 3)), (C, mpq(1, 9)), Q, mpq(2, 3))
    s = phi_series_in_x(spec, 6)
    for i in range(7):
        expected = (qpoch(A, i, Q) * qpoch(B, i, Q) * qpoch(mpq(7, 3), i, Q)
                    / (qpoch(Q, i, Q) * qpoch(C, i, Q) * qpoch(mpq(1, 9), i, Q))) * mpq(2, 3) ** i
        assert s[i] == expected


def test_one_phi_zero_matches_product_expansion():
    assert qbinomial_series_check(mpq(1, 2), Q, 20)
    assert qbinomial_series_check(A, mpq(1, 3), 20)


@pytest.mark.parametrize("n", range(0, 13))
def test_finite_q_binomial(n):
    assert qbinomial_finite_check(n, Q)


def test_terminating_two_term_cancellation():
    v = phi_value(phi21(Q ** -1, C, C, Q, Q))
    assert v.value == 0 and v.error_bound == 0


def test_numerator_one_gives_one():
    v = phi_value(phi21(1, B, C, Q, mpq(1, 2)))
    assert v.value == 1 and v.error_bound == 0


def test_one_phi_zero_value_against_products():
    q, a, x = mpq(1, 3), mpq(1, 2), mpq(1, 4)
    lhs = phi_value(PhiSpec((a,), (), q, x), EPS)
    rhs = qpoch_inf(a * x, q, EPS) / qpoch_inf(x, q, EPS)
    assert lhs.overlaps(rhs)
    assert lhs.error_bound <= EPS


def test_divergent_argument_rejected():
    with pytest.raises(ValueError):
        phi_value(phi21(A, B, C, Q, mpq(3, 2)))


def test_denominator_hitting_zero_signals_non_generic():
    # c = q^{-1}: the factor (1 - c q) vanishes at index 1
    with pytest.raises(NonGenericError):
        phi_value(phi21(A, B, Q ** -1, Q, mpq(1, 2)))


def test_hyper_sum_tail_bound_is_honest():
    v = hyper_sum(mpq(1), mpq(1, 2), [A, B], [C, Q], Q, mpq(1, 10 ** 10))
    exact_more = hyper_sum(mpq(1), mpq(1, 2), [A, B], [C, Q], Q, mpq(1, 10 ** 40))
    assert v.contains(exact_more.value)


def test_four_phi_three_small_j():
    bs = (A, B, mpq(7, 3))
    cs = (C, mpq(1, 9), mpq(4, 5))
    arg = mpq(2, 3)
    assert phi4_3_terminating(0, bs, cs, arg, Q) == 1
    expected = 1 + ((1 - Q ** -1) * (1 - bs[0]) * (1 - bs[1]) * (1 - bs[2]) * arg
                    / ((1 - Q) * (1 - cs[0]) * (1 - cs[1]) * (1 - cs[2])))
    assert phi4_3_terminating(1, bs, cs, arg, Q) == expected


def test_four_phi_three_matches_generic_evaluator():
    bs = (mpq(5, 3), mpq(-2, 7), mpq(9, 4))
    cs = (mpq(1, 6), mpq(8, 5), mpq(-3, 10))
    arg = mpq(7, 2)
    exact = phi4_3_terminating(4, bs, cs, arg, Q)
    assert exact == phi_terminating((Q ** -4,) + bs, cs, arg, Q)
    generic = phi_value(PhiSpec((Q ** -4,) + bs, cs, Q, arg))
    assert generic.value == exact and generic.error_bound == 0


def test_phi_tilde_prefactor_cancels_at_a_equal_q():
    q = mpq(1, 3)
    pre, series = phi_tilde_2_1(q, B, C, q, 10)
    assert pre.overlaps(qpoch_inf(C, q, EPS) / qpoch_inf(B, q, EPS))
    assert series == phi21_series(q, B, C, q, 1, 10)


def test_phi_tilde_product_against_direct_sum():
    q, x = mpq(1, 3), mpq(1, 5)
    pre, _ = phi_tilde_2_1(A, B, C, q, 5)
    direct = hyper_sum(mpq(1), x, [A, B], [C, q], q, EPS)
    product = pre * direct
    again = (qpoch_inf(q, q, EPS) * qpoch_inf(C, q, EPS)
             / (qpoch_inf(A, q, EPS) * qpoch_inf(B, q, EPS))) * direct
    assert product.overlaps(again)


def test_phi_d_all_b_one_is_one():
    v = phi_D(MultiPhiDSpec(A, (1, 1), C, (mpq(1, 4), mpq(1, 5)), Q))
    assert v.value == 1 and v.error_bound == 0


def test_phi_d_single_index_is_two_phi_one():
    q, a, b, c, x = mpq(1, 3), mpq(2, 7), mpq(3, 5), mpq(4, 13), mpq(1, 4)
    multi = phi_D(MultiPhiDSpec(a, (b,), c, (x,), q), EPS)
    single = phi_value(phi21(a, b, c, q, x), EPS)
    assert multi.overlaps(single)


def test_andrews_single_variable():
    q, a, b, c, x = mpq(1, 3), mpq(2, 7), mpq(3, 5), mpq(4, 13), mpq(1, 4)
    lhs = phi_D(MultiPhiDSpec(a, (b,), c, (x,), q), EPS)
    pref = (qpoch_inf(a, q, EPS) * qpoch_inf(b * x, q, EPS)
            / (qpoch_inf(c, q, EPS) * qpoch_inf(x, q, EPS)))
    rhs = pref * phi_value(phi21(c / a, x, b * x, q, a), EPS)
    assert lhs.overlaps(rhs)


def test_phi_d_terminating_is_exact():
    q = mpq(1, 3)
    v = phi_D(MultiPhiDSpec(mpq(2, 7), (q ** -2, q ** -1), mpq(4, 13), (mpq(3, 2), 5), q))
    assert v.error_bound == 0


def test_phi_d_tilde_relates_to_phi_d():
    q, a, c = mpq(1, 3), mpq(2, 7), mpq(4, 13)
    b_list, x_list = (mpq(3, 5), mpq(5, 11)), (mpq(1, 4), mpq(2, 9))
    spec = MultiPhiDSpec(a, b_list, c, x_list, q)
    plain = phi_D(spec, EPS)
    tilde = phi_D_tilde(spec, EPS)
    # the normalized series carries (c)_inf / (a)_inf in front
    assert isinstance(tilde, BoundedValue)
    scaled = plain * qpoch_inf(c, q, EPS) / qpoch_inf(a, q, EPS)
    assert tilde.overlaps(scaled)


def test_divergent_multiple_series_rejected():
    with pytest.raises(ValueError):
        phi_D(MultiPhiDSpec(A, (B,), C, (mpq(3, 2),), Q))


def test_product_formula_generic():
    r = product_formula_check(A, B, C, mpq(7, 3), mpq(-1, 6), mpq(9, 17), mpq(2, 3), mpq(5, 4), Q, 25)
    assert r["passed"], r


def test_product_formula_g_zero():
    r = product_formula_check(A, B, C, mpq(7, 3), mpq(-1, 6), mpq(9, 17), 0, mpq(5, 4), Q, 10)
    assert r["passed"], r


def test_heine_q_euler():
    assert heine_check(A, B, C, Q)["passed"]


def test_qpoch_inf_series_first_terms():
    s = qpoch_inf_series(A, Q, 3)
    assert s[0] == 1
    assert s[1] == -A / (1 - Q)
    assert s[2] == A ** 2 * Q / ((1 - Q) * (1 - Q ** 2))


def test_heine_detects_perturbation():
    # swapping to a wrong reference point must break the identity
    a, b, c = A, B, C
    lhs = qpoch_inf_series(1, Q, 10) * phi21_series(a, b, c, Q, 1, 10)
    rhs = qpoch_inf_series(a * b / c, Q, 10) * phi21_series(c / a, c / b, c * Q, Q, a * b / c, 10)
    assert (lhs - rhs).first_nonzero() is not None


def test_qpow_negative():
    assert qpow(Q, -2) == 1 / Q ** 2

from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from qthreeterm.qcore import (DEFAULT_POINT, BoundedValue, GenericPoint, NonGenericError,
                              check_generic, qpoch, qpoch_identity_suite, qpoch_inf, qpow,
                              rat, rat_str, rqpoch)

Q = mpq(3, 7)

small_rationals = st.builds(lambda n, d: mpq(n, d),
                            st.integers(-30, 30).filter(lambda v: v != 0), st.integers(1, 30))


def test_rat_accepts_fraction_and_string():
    assert rat(Fraction(3, 6)) == mpq(1, 2)
    assert rat("-4/10") == mpq(-2, 5)
    with pytest.raises(TypeError):
        rat(0.5)


def test_rat_str_always_num_over_den():
    assert rat_str(mpq(3)) == "3/1"
    assert rat_str(mpq(-6, 4)) == "-3/2"


def test_qpoch_zero_index_is_one():
    assert qpoch(mpq(5, 9), 0, Q) == 1


def test_qpoch_two_factors():
    z = mpq(2, 3)
    assert qpoch(z, 2, Q) == (1 - z) * (1 - z * Q)


def test_qpoch_negative_index_example():
    assert qpoch(mpq(1, 2), -1, mpq(1, 3)) == -2


def test_qpoch_negative_index_vanishing_denominator():
    # (z q^{-1}; q)_1 = 0 when z = q
    with pytest.raises(NonGenericError):
        qpoch(Q, -1, Q)


def test_rqpoch_of_q_at_negative_index_is_zero():
    for j in range(-5, 0):
        assert rqpoch(Q, j, Q) == 0
    assert rqpoch(Q, 3, Q) == 1 / qpoch(Q, 3, Q)


@settings(max_examples=60, deadline=None)
@given(small_rationals, st.integers(-6, 6), st.integers(-6, 6))
def test_qpoch_split_property(z, i, j):
    try:
        lhs = qpoch(z, i + j, Q)
        rhs = qpoch(z, i, Q) * qpoch(z * qpow(Q, i), j, Q)
    except NonGenericError:
        return
    assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(small_rationals, st.integers(-8, 8))
def test_qpoch_inverse_property(z, n):
    try:
        assert qpoch(z, n, Q) * qpoch(z * qpow(Q, n), -n, Q) == 1
    except NonGenericError:
        pass


def test_qpoch_inf_zero_argument_exact():
    v = qpoch_inf(0, Q, mpq(1, 10 ** 20))
    assert v.value == 1 and v.error_bound == 0


def test_qpoch_inf_zero_base_exact():
    v = qpoch_inf(mpq(2, 3), 0, mpq(1, 10 ** 20))
    assert v.value == mpq(1, 3) and v.error_bound == 0


def test_qpoch_inf_contains_long_partial_product():
    eps = mpq(1, 10 ** 30)
    v = qpoch_inf(mpq(1, 2), mpq(1, 3), eps)
    assert v.error_bound <= eps
    partial = mpq(1)
    for j in range(200):
        partial *= 1 - mpq(1, 2) * mpq(1, 3) ** j
    assert v.contains(partial)


@settings(max_examples=25, deadline=None)
@given(small_rationals, st.integers(1, 60))
def test_qpoch_inf_contains_every_longer_partial_product(z, extra):
    q = mpq(2, 5)
    v = qpoch_inf(z, q, mpq(1, 10 ** 12))
    partial = mpq(1)
    for j in range(120 + extra):
        partial *= 1 - z * q ** j
    assert v.contains(partial)


def test_bounded_value_arithmetic_encloses():
    x = BoundedValue(mpq(1, 3), mpq(1, 1000))
    y = BoundedValue(mpq(-2, 7), mpq(1, 500))
    for op in (lambda u, v: u + v, lambda u, v: u - v, lambda u, v: u * v, lambda u, v: u / v):
        r = op(x, y)
        for dx in (-x.error_bound, x.error_bound):
            for dy in (-y.error_bound, y.error_bound):
                assert r.contains(op(x.value + dx, y.value + dy))


def test_bounded_value_rejects_negative_error():
    with pytest.raises(ValueError):
        BoundedValue(mpq(1), mpq(-1))


def test_default_point_is_generic():
    assert check_generic(DEFAULT_POINT)
    assert DEFAULT_POINT.window == 12


def test_a_equal_q_squared_not_generic():
    q = mpq(1, 2)
    p = GenericPoint(q, q ** 2, mpq(3, 11), mpq(5, 13), window=2)
    assert not check_generic(p)
    assert "a = q^2" in p.violations()


def test_zero_b_not_generic():
    p = GenericPoint(Q, mpq(2, 5), mpq(0), mpq(5, 13))
    assert not check_generic(p)


def test_ratio_hitting_q_power_not_generic():
    # c / a = q^{-1}
    a = mpq(2, 5)
    p = GenericPoint(Q, a, mpq(3, 11), a / Q)
    assert not check_generic(p)


def test_identity_suite_examples():
    z = mpq(2, 3)
    assert qpoch(z, 5, Q) == qpoch(z, 2, Q) * qpoch(z * Q ** 2, 3, Q)
    lhs = qpoch(z, 4, Q)
    rhs = qpoch(Q ** -3 / z, 4, Q) * z ** 4 * Q ** 6
    assert lhs == rhs
    assert qpoch(z, 0, Q) == qpoch(Q / z, 0, Q) == 1


def test_identity_suite_random_draws_clean():
    report = qpoch_identity_suite(Q, 200, seed=7)
    assert report["violations"] == []
    assert report["checked"] > 400


def test_identity_suite_rejects_nonpositive_samples():
    with pytest.raises(ValueError):
        qpoch_identity_suite(Q, 0)

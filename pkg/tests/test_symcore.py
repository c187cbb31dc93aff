from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qkw.symcore import (
    ONE,
    ZERO,
    IntPoly,
    MultiSeries,
    NotAPolynomialError,
    PoleError,
    RatFun,
    T,
    box_keys,
    mobius,
    pleth_exp,
    pleth_log,
    rf_adams,
    rf_arith,
    rf_as_polynomial,
    rf_eval,
    series_adams,
    series_inverse,
    series_monomial_twist,
    series_mul,
    series_substitute_inverse,
)


def rf(num, den=(1,)):
    return RatFun(list(num), list(den))


# -- rational functions -----------------------------------------------------


def test_inverse_pair_multiplies_to_one():
    assert rf_arith(rf([1], [1, -1]), rf([1, -1]), "mul") == ONE


def test_add_negation_is_zero():
    assert rf_arith(T, -T, "add") == ZERO


def test_gcd_reduction():
    f = rf([-1, 0, 1], [-1, 1])
    assert f == rf([1, 1])
    assert f.denominator.coefficients == (1,)


def test_division_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        rf_arith(T, ZERO, "div")


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        rf_arith(T, T, "pow")


@pytest.mark.parametrize(
    "f, q, expected",
    [
        (rf([0, 1], [-1, 1]), 2, 2),
        (rf([0, 0, 0, 1, 0, 1]), 2, 40),
        (rf([1], [0, 0, 1]), Fraction(1, 2), 4),
    ],
)
def test_eval(f, q, expected):
    assert rf_eval(f, q) == expected


def test_eval_pole_names_denominator():
    with pytest.raises(PoleError, match="denominator"):
        rf_eval(rf([1], [1, -1]), 1)


def test_adams_substitutes_power():
    assert rf_adams(rf([1], [1, -1]), 2) == rf([1], [1, 0, -1])
    assert rf_adams(T, 3) == RatFun.t_power(3)


def test_adams_rejects_nonpositive():
    with pytest.raises(ValueError):
        rf_adams(T, 0)


def test_as_polynomial():
    assert rf_as_polynomial(rf([-1, 0, 1], [-1, 1])).coefficients == (1, 1)
    with pytest.raises(NotAPolynomialError) as info:
        rf_as_polynomial(rf([1, 0, 1], [1, 1]))
    assert info.value.remainder == RatFun(2)


def test_canonical_form_content():
    # 2/4 and 1/2 share a representation; the joint content is 1
    assert RatFun(2, 4) == RatFun(1, 2)
    assert RatFun(2, 4).numerator.coefficients == (1,)
    assert RatFun(2, 4).denominator.coefficients == (2,)
    f = rf([1], [-1, -1])
    assert f.denominator.leading() > 0


def test_invert_variable():
    assert rf([1, 2]).invert_variable() == rf([2, 1], [0, 1])


def test_intpoly_degree_of_product():
    a, b = IntPoly([1, 2, 3]), IntPoly([0, 5])
    assert (a * b).degree == a.degree + b.degree
    big = IntPoly([10 ** 40, 1])
    assert (big * big).coefficients[0] == 10 ** 80


small_poly = st.lists(st.integers(-5, 5), min_size=1, max_size=4)
small_den = st.sampled_from([[1], [1, -1], [0, 1], [1, 0, 1], [2, 1]])


@st.composite
def ratfuns(draw):
    return RatFun(draw(small_poly), draw(small_den))


@settings(max_examples=100, deadline=None)
@given(ratfuns(), ratfuns(), ratfuns())
def test_field_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    if not b.is_zero():
        assert (a / b) * b == a


@settings(max_examples=100, deadline=None)
@given(ratfuns(), st.sampled_from([3, 5, 7, Fraction(1, 3)]))
def test_eval_is_ring_homomorphism(a, q):
    b = a * a + T
    assert rf_eval(b, q) == rf_eval(a, q) ** 2 + q


@settings(max_examples=100, deadline=None)
@given(ratfuns(), ratfuns(), st.integers(1, 4))
def test_adams_is_ring_map(a, b, l):
    assert rf_adams(a * b, l) == rf_adams(a, l) * rf_adams(b, l)
    assert rf_adams(a + b, l) == rf_adams(a, l) + rf_adams(b, l)


@settings(max_examples=100, deadline=None)
@given(ratfuns())
def test_representation_is_canonical(a):
    b = RatFun(a.numerator.coefficients, a.denominator.coefficients)
    scaled = RatFun([3 * c for c in a.numerator.coefficients], [3 * c for c in a.denominator.coefficients])
    assert a == b == scaled
    assert scaled.numerator.coefficients == a.numerator.coefficients
    assert hash(scaled) == hash(a)


# -- series --------------------------------------------------------------------


def test_box_keys_order():
    assert box_keys((1, 1)) == ((0, 0), (0, 1), (1, 0), (1, 1))


def test_mul_truncates():
    box = (2,)
    z = MultiSeries.monomial(box, (1,))
    assert series_mul(series_mul(z, z), z).terms == {}


def test_inverse_of_one_minus_z():
    box = (4,)
    f = MultiSeries(box, {(0,): ONE, (1,): -ONE})
    inv = series_inverse(f)
    assert all(inv[(k,)] == ONE for k in range(5))


def test_inverse_requires_unit_constant():
    with pytest.raises(ZeroDivisionError):
        series_inverse(MultiSeries.monomial((2,), (1,)))


def test_exp_of_z_is_geometric():
    box = (5,)
    E = pleth_exp(MultiSeries.monomial(box, (1,)))
    assert all(E[(k,)] == ONE for k in range(6))


def test_exp_of_tz_gives_pochhammer_like_terms():
    # Exp(t z) = 1 / (1 - t z)
    box = (3,)
    E = pleth_exp(MultiSeries.monomial(box, (1,), T))
    assert [E[(k,)] for k in range(4)] == [RatFun.t_power(k) for k in range(4)]


def test_exp_rejects_constant_term():
    with pytest.raises(ValueError):
        pleth_exp(MultiSeries.one((2,)))


def test_log_rejects_bad_constant():
    with pytest.raises(ValueError):
        pleth_log(MultiSeries.monomial((2,), (1,)))


def test_monomial_twist():
    box = (2, 2)
    f = MultiSeries(box, {(1, 2): ONE})
    assert series_monomial_twist(f, (1, -1))[(1, 2)] == RatFun.t_power(-1)


def test_substitute_inverse():
    f = MultiSeries((1,), {(1,): rf([0, 1], [1, 1])})
    assert series_substitute_inverse(f)[(1,)] == rf([1], [1, 1])


def test_box_mismatch():
    with pytest.raises(ValueError):
        MultiSeries.one((1,)) + MultiSeries.one((2,))


@pytest.mark.parametrize("n, mu", [(1, 1), (2, -1), (4, 0), (6, 1), (30, -1)])
def test_mobius(n, mu):
    assert mobius(n) == mu


@st.composite
def series(draw, box=(4,)):
    keys = [v for v in box_keys(box) if any(v)]
    terms = {v: draw(ratfuns()) for v in keys if draw(st.booleans())}
    return MultiSeries(box, terms)


@settings(max_examples=100, deadline=None)
@given(series(), series())
def test_exp_log_laws(f, g):
    assert pleth_log(pleth_exp(f)) == f
    assert pleth_exp(f + g) == series_mul(pleth_exp(f), pleth_exp(g))


@settings(max_examples=100, deadline=None)
@given(series(box=(2, 2)), st.integers(1, 3), st.integers(1, 3))
def test_adams_laws(f, k, l):
    assert series_adams(series_adams(f, k), l) == series_adams(f, k * l)
    assert pleth_exp(series_adams(f, k)) == series_adams(pleth_exp(f), k)


@settings(max_examples=100, deadline=None)
@given(series(box=(3, 1)))
def test_inverse_roundtrip(f):
    u = MultiSeries.one(f.box) + f
    assert series_mul(u, series_inverse(u)) == MultiSeries.one(f.box)

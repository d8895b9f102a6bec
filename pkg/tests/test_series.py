from __future__ import annotations

import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from vvmfden.forms import j_series
from vvmfden.series import (
    QExpansion,
    SeriesDomainError,
    compose,
    invert,
    mul_series,
    pow_rational,
    theta,
)

N = 8
small = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 12))
nonzero_small = st.builds(Fraction, st.integers(1, 20) | st.integers(-20, -1), st.integers(1, 12))


@st.composite
def series(draw, unit=False):
    coeffs = draw(st.lists(small, min_size=N + 1, max_size=N + 1))
    if unit:
        coeffs[0] = draw(nonzero_small)
    h = draw(st.sampled_from([Fraction(0), Fraction(1, 3), Fraction(-1, 2), Fraction(5, 6)]))
    return QExpansion(coeffs, h, N)


def q(coeffs, h=0, order=None):
    return QExpansion(coeffs, h, order)


def test_addition_examples():
    s = q([1], Fraction(1, 2), 4) + q([-1], Fraction(1, 2), 4)
    assert s.is_zero
    assert q([1, 1], 0, 4) + q([0, 1], 0, 4) == q([1, 2], 0, 4)
    lhs = q([1, 1], Fraction(1, 3), 3) + q([1], Fraction(4, 3), 2)
    assert lhs == q([1, 2], Fraction(1, 3), 3)


def test_product_examples():
    assert q([1, 1], 0, 5) * q([1, -1], 0, 5) == q([1, 0, -1], 0, 5)
    p = q([1], Fraction(1, 12), 3) * q([1], Fraction(1, 12), 3)
    assert p.leading_exponent == Fraction(1, 6)
    assert q([1, -1], 0, 6) * q([1] * 7, 0, 6) == QExpansion.one(6)


def test_invert_examples():
    assert invert(q([1, -1], 0, 6)) == q([1] * 7, 0, 6)
    assert invert(q([1], -1, 4)) == q([1], 1, 4)
    ji = invert(j_series(5))
    assert ji.leading_exponent == 1
    assert ji.coefficients[:3] == (1, -744, 356652)
    with pytest.raises(SeriesDomainError):
        invert(QExpansion.zero())


def test_pow_examples():
    half = pow_rational(q([1, 1], 0, 6), Fraction(1, 2))
    assert half.coefficients[:4] == (1, Fraction(1, 2), Fraction(-1, 8), Fraction(1, 16))
    assert pow_rational(q([3, 1, 2], 0, 5), 0) == QExpansion.one(5)
    assert q([1, 1], 1, 5) ** 2 == q([1, 2, 1], 2, 5)
    with pytest.raises(SeriesDomainError):
        pow_rational(q([2, 1], 0, 4), Fraction(1, 2))


def test_theta_examples():
    assert theta(q([1], Fraction(1, 2), 3)) == q([Fraction(1, 2)], Fraction(1, 2), 3)
    assert theta(QExpansion.one(4)).is_zero
    m, c = Fraction(2, 7), Fraction(5)
    assert theta(q([1, c], m, 1)) == q([m, c * (m + 1)], m, 1)


def test_compose_examples():
    geo = compose([1] * 10, q([1], 1, 9))
    assert geo == q([1] * 10, 0, 9)
    assert compose([1, 1], q([1], 2, 6)).coefficients[:3] == (1, 0, 1)
    with pytest.raises(SeriesDomainError):
        compose([1, 1], q([1, 1], 0, 4))


def test_precision_is_tracked():
    f = q([1, 2, 3], 0, 2) * q([1, 1, 1, 1, 1], 0, 4)
    assert f.order == 2
    assert (q([1], 0, 2) + q([1], 1, 9)).valid_through == 2


def test_zero_series_json():
    z = QExpansion.zero(Fraction(7, 2))
    assert QExpansion.from_json(json.loads(json.dumps(z.to_json()))).valid_through == Fraction(7, 2)
    assert QExpansion.from_json(QExpansion.zero().to_json()).valid_through == math.inf


@given(series(), series(), series())
def test_ring_laws(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


@given(series(), series())
def test_leibniz(f, g):
    assert theta(f * g) == theta(f) * g + f * theta(g)


@given(series(unit=True))
def test_invert_contract(f):
    one = mul_series(f, invert(f))
    assert one == QExpansion.one(N)


@given(series(unit=True), small, small)
@settings(max_examples=40)
def test_pow_group_law(f, x, y):
    u = f.scale(1 / f[0]).shift(-f.leading_exponent)
    assert pow_rational(u, x) * pow_rational(u, y) == pow_rational(u, x + y)


@given(st.lists(small, min_size=N + 1, max_size=N + 1), st.lists(small, min_size=N + 1, max_size=N + 1), series(unit=True))
def test_compose_linear_in_outer(a, b, inner):
    inner = inner.shift(1 - inner.leading_exponent)
    s = [x + y for x, y in zip(a, b)]
    assert compose(s, inner) == compose(a, inner) + compose(b, inner)


@given(series(unit=True), st.integers(min_value=0, max_value=4))
def test_compose_with_monomial(inner, k):
    inner = inner.shift(1 - inner.leading_exponent)
    outer = [0] * k + [1]
    expected = inner**k if k else QExpansion.one(N)
    assert compose(outer, inner).agrees_with(expected)


@given(series())
def test_json_round_trip(f):
    data = json.loads(json.dumps(f.to_json()))
    assert QExpansion.from_json(data) == f
    assert QExpansion.from_json(data).to_json() == f.to_json()

from __future__ import annotations

import math
from fractions import Fraction

import pytest

from vvmfden.forms import eta_power, form_cache
from vvmfden.hypergeom import (
    C_n,
    HypergeomSpec,
    closed_form_solution,
    f21_coefficients,
    jform_series,
    lemma_valuation_check,
    pochhammer,
    pochhammer_ratio,
)
from vvmfden.mlde import derive_params, frobenius_solve, theta_form_residual
from vvmfden.rational import ParameterError, padic_valuation
from vvmfden.series import SeriesDomainError, invert, mul_series, pow_rational


def test_pochhammer():
    assert pochhammer(Fraction(7, 3), 0) == 1
    assert pochhammer(Fraction(1, 2), 3) == Fraction(15, 8)
    assert [pochhammer(1, n) for n in range(8)] == [math.factorial(n) for n in range(8)]


def test_f21_examples():
    spec = HypergeomSpec(Fraction(0), Fraction(1, 3), Fraction(5, 4))
    assert f21_coefficients(spec, 5) == [1, 0, 0, 0, 0, 0]
    p = derive_params("3/10", "2/10")
    assert f21_coefficients(HypergeomSpec.for_component(p, "f1"), 1)[1] == Fraction(28, 495)
    with pytest.raises(SeriesDomainError):
        f21_coefficients(HypergeomSpec(Fraction(1), Fraction(1), Fraction(-2)), 5)


def test_f21_geometric():
    # F(1, b; b; z) = 1/(1 - z)
    assert f21_coefficients(HypergeomSpec(Fraction(1), Fraction(2, 7), Fraction(2, 7)), 10) == [1] * 11


def test_C_n_examples():
    assert C_n(1, 10, 1) == Fraction(28, 495)
    assert C_n(1, 6, 1) == Fraction(1, 14)
    assert C_n(1, 10, 1, "minus") == Fraction(11, 810)


@pytest.mark.parametrize("m1,m2", [("3/10", "2/10"), ("2/10", "3/10"), ("1/2", "1/3"), ("3/8", "1/8")])
def test_product_matches_pochhammer(m1, m2):
    p = derive_params(m1, m2)
    for branch in ("plus", "minus"):
        for n in range(1, 40):
            assert C_n(p.P, p.Q, n, branch) == pochhammer_ratio(p, n, branch)


def test_degenerate_closed_form():
    p = derive_params("1/2", "1/3")
    assert closed_form_solution(p, "f2", 60) == eta_power(8, 60)


@pytest.mark.parametrize("m1,m2", [("3/10", "2/10"), ("2/10", "3/10"), ("5/12", "1/12"), ("7/16", "1/16")])
def test_closed_form_equals_frobenius(m1, m2):
    p = derive_params(m1, m2)
    for which, root in (("f1", "m1"), ("f2", "m2")):
        f = closed_form_solution(p, which, 60)
        assert f.leading_exponent == p.exponent(root)
        assert f == frobenius_solve(p, root, 60)


def test_closed_form_satisfies_theta_equation():
    p = derive_params("3/10", "2/10")
    f = closed_form_solution(p, "f1", 40)
    stripped = mul_series(f, invert(eta_power(2 * p.k0, 40)))
    assert theta_form_residual(stripped, p).is_zero


def test_jform_expansion():
    p = derive_params("3/10", "2/10")
    order = 40
    f = frobenius_solve(p, "m1", order)
    hyp = mul_series(mul_series(f, invert(eta_power(2 * p.k0, order))), pow_rational(form_cache(order).j_inverse, -p.a))
    assert hyp == jform_series(p, order)


def test_valuation_examples():
    v = lemma_valuation_check(1, 10, 200)
    assert v.passed
    assert [c.description.split()[0] for c in v.cases] == [
        f"p={p}" for p in (11, 31, 41, 61, 71, 101, 131, 151, 181, 191)
    ]
    v = lemma_valuation_check(-1, 10, 100)
    assert v.passed
    assert [c.description.split()[0] for c in v.cases] == ["p=11", "p=31", "p=41", "p=61", "p=71"]
    v = lemma_valuation_check(1, 7, 50)
    assert [c.description.split()[0] for c in v.cases] == ["p=29", "p=43"]
    assert v.passed


def test_valuation_valuation_direct():
    for p in (11, 31, 41):
        assert padic_valuation(C_n(1, 10, (p - 1) // 10), p) == -1


def test_valuation_rejects_small_Q():
    with pytest.raises(ParameterError):
        lemma_valuation_check(1, 5, 100)

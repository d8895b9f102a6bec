from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from vvmfden.rational import (
    ParameterError,
    PrimeFactorization,
    UnfactoredResidue,
    factor_integer,
    factor_rational,
    format_rational,
    is_prime,
    padic_valuation,
    parse_rational,
    primes_in_progression,
    primes_up_to,
)

SMALL_PRIMES = [2, 3, 5, 7, 11, 13]
nonzero = st.builds(Fraction, st.integers(1, 10**9) | st.integers(-(10**9), -1), st.integers(1, 10**9))


def test_valuation_examples():
    assert padic_valuation(8, 2) == 3
    assert padic_valuation(Fraction(2, 9), 3) == -2
    assert padic_valuation(Fraction(28, 495), 11) == -1
    assert padic_valuation(0, 5) == math.inf


def test_valuation_rejects_composite():
    with pytest.raises(ParameterError):
        padic_valuation(12, 4)


def test_factor_examples():
    assert factor_rational(Fraction(28, 495)) == (1, PrimeFactorization(((2, 2), (3, -2), (5, -1), (7, 1), (11, -1))))
    assert factor_rational(1) == (1, PrimeFactorization(()))
    assert factor_rational(-6) == (-1, PrimeFactorization(((2, 1), (3, 1))))


def test_factor_zero_raises():
    with pytest.raises(ParameterError):
        factor_rational(0)


def test_unfactored_residue():
    n = 1000003 * 1000033
    with pytest.raises(UnfactoredResidue) as info:
        factor_integer(n, bound=1000)
    assert info.value.residue == n
    assert factor_integer(n, bound=10**7) == {1000003: 1, 1000033: 1}


def test_progression_examples():
    assert primes_in_progression(10, 9, 100) == [19, 29, 59, 79, 89]
    assert primes_in_progression(10, 1, 50) == [11, 31, 41]
    assert primes_in_progression(1, 0, 10) == [2, 3, 5, 7]


def test_sieve_agrees_with_primality_test():
    assert list(primes_up_to(3000)) == [n for n in range(3000 + 1) if is_prime(n)]


def test_parse_and_format():
    assert parse_rational("3/10") == Fraction(3, 10)
    assert parse_rational("−1/2") == Fraction(-1, 2)
    assert format_rational(Fraction(2, 10)) == "1/5"
    assert format_rational(Fraction(4, 2)) == "2"
    with pytest.raises(ValueError):
        parse_rational("x/2")


@given(nonzero, nonzero, st.sampled_from(SMALL_PRIMES))
def test_valuation_is_additive(r, s, p):
    assert padic_valuation(r * s, p) == padic_valuation(r, p) + padic_valuation(s, p)


@given(nonzero, nonzero, st.sampled_from(SMALL_PRIMES))
def test_valuation_ultrametric(r, s, p):
    if r + s != 0:
        assert padic_valuation(r + s, p) >= min(padic_valuation(r, p), padic_valuation(s, p))


@given(nonzero)
def test_factorization_round_trip(r):
    sign, fac = factor_rational(r)
    assert sign * fac.value() == r


@given(st.integers(min_value=2, max_value=30), st.integers(min_value=2, max_value=3000))
def test_progressions_partition_primes(m, bound):
    union = sorted(p for r in range(m) for p in primes_in_progression(m, r, bound))
    assert union == list(primes_up_to(bound))

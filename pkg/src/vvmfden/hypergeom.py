"""Gauss hypergeometric series and the closed-form solutions built from them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Literal

from .forms import form_cache
from .mlde import MLDEParams
from .rational import ParameterError, RationalLike, as_rational, padic_valuation, primes_up_to
from .series import QExpansion, SeriesDomainError, compose, mul_series, pow_rational
from .verdict import Verdict

Branch = Literal["plus", "minus"]


@dataclass(frozen=True)
class HypergeomSpec:
    """Parameters of ``F(upper1, upper2; lower; z)``."""

    upper1: Fraction
    upper2: Fraction
    lower: Fraction

    @classmethod
    def for_component(cls, params: MLDEParams, which: str) -> HypergeomSpec:
        """Branch at ``J = infinity``: ``(a, 1+a-c; 1+a-b)`` for f1 and the a/b swap for f2."""
        a, b, c = params.a, params.b, params.c
        if which == "f1":
            return cls(a, 1 + a - c, 1 + a - b)
        if which == "f2":
            return cls(b, 1 + b - c, 1 + b - a)
        raise ParameterError(f"unknown component {which!r}")


def pochhammer(x: RationalLike, n: int) -> Fraction:
    """Rising factorial ``x (x+1) ... (x+n-1)``."""
    if n < 0:
        raise ParameterError("n must be >= 0")
    x = as_rational(x)
    out = Fraction(1)
    for k in range(n):
        out *= x + k
    return out


def f21_coefficients(spec: HypergeomSpec, order: int) -> list[Fraction]:
    """Taylor coefficients ``0..order`` of ``F`` at ``z = 0`` by the term-ratio recurrence."""
    u1, u2, low = spec.upper1, spec.upper2, spec.lower
    out = [Fraction(1)]
    for n in range(order):
        if low + n == 0:
            raise SeriesDomainError(f"lower parameter {low} hits a non-positive integer")
        out.append(out[-1] * (u1 + n) * (u2 + n) / ((low + n) * (1 + n)))
    return out


def C_n(P: int, Q: int, n: int, branch: Branch = "plus") -> Fraction:
    """Closed product for the n-th hypergeometric coefficient.

    ``plus`` is the f1 branch,
    ``(144Q)^-n prod_{k<n} (12Qk+Q+6P)(12Qk+5Q+6P) / ((Qk+Q+P)(k+1))``;
    ``minus`` flips the sign of ``P`` (the f2 branch).
    """
    if n < 1:
        raise ParameterError("n must be >= 1")
    if Q < 2:
        raise ParameterError("Q must be >= 2")
    s = P if branch == "plus" else -P
    num = 1
    den = (144 * Q) ** n
    for k in range(n):
        num *= (12 * Q * k + Q + 6 * s) * (12 * Q * k + 5 * Q + 6 * s)
        d = Q * k + Q + s
        assert d != 0, "zero factor in the denominator product"
        den *= d * (k + 1)
    return Fraction(num, den)


def pochhammer_ratio(params: MLDEParams, n: int, branch: Branch = "plus") -> Fraction:
    """Coefficient of ``z^n`` in the f1 (``plus``) or f2 (``minus``) hypergeometric factor."""
    spec = HypergeomSpec.for_component(params, "f1" if branch == "plus" else "f2")
    return (
        pochhammer(spec.upper1, n)
        * pochhammer(spec.upper2, n)
        / (pochhammer(spec.lower, n) * pochhammer(1, n))
    )


def closed_form_solution(params: MLDEParams, which: str, order: int) -> QExpansion:
    """``eta^(2k0) (j^-1)^mu F(..; 1728 j^-1)`` normalized to leading coefficient 1.

    ``J^-mu = 1728^mu j^-mu``; the constant ``1728^mu`` is dropped, which is the
    only irrational ingredient.
    """
    if params.Q < 2:
        raise ParameterError("Q must be >= 2")
    spec = HypergeomSpec.for_component(params, which)
    mu = params.a if which == "f1" else params.b
    forms = form_cache(order)
    jinv = forms.j_inverse
    coeffs = f21_coefficients(spec, order)
    outer = [c * 1728**n for n, c in enumerate(coeffs)]
    hyp = compose(outer, jinv)
    f = mul_series(mul_series(forms.eta(2 * params.k0), pow_rational(jinv, mu)), hyp)
    lead = f[0]
    return f if lead == 1 else f.scale(1 / lead)


def jform_series(params: MLDEParams, order: int) -> QExpansion:
    """``1 + sum 12^(3n) C_n j^(-n)`` as a q-series."""
    outer = [Fraction(1)] + [C_n(params.P, params.Q, n, "plus") * 1728**n for n in range(1, order + 1)]
    return compose(outer, form_cache(order).j_inverse)


def lemma_valuation_check(P: int, Q: int, prime_bound: int) -> Verdict:
    """Valuation of the designated coefficient at each progression prime up to the bound.

    For ``P > 0`` the primes ``p = Qn + P`` are checked against ``C_n``; for
    ``P < 0`` the primes ``p = Qn - P`` against the f2-branch product. A case
    passes when the valuation is exactly -1.
    """
    if Q < 6:
        raise ParameterError("the valuation check needs Q >= 6")
    if P == 0 or gcd(P, Q) != 1:
        raise ParameterError("P and Q must be coprime and P nonzero")
    branch: Branch = "plus" if P > 0 else "minus"
    shift = abs(P)
    verdict = Verdict(f"lemma P={P} Q={Q}")
    for p in primes_up_to(prime_bound):
        n, r = divmod(p - shift, Q)
        if r or n < 1:
            continue
        v = padic_valuation(C_n(P, Q, n, branch), p)
        verdict.add(f"p={p} n={n} branch={branch}", -1, v)
    return verdict

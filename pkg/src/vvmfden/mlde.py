"""Parameters and Frobenius solutions of the second-order modular differential equation

    (D_{k0+2} o D_{k0} - k1 E4) f = 0.

Solutions are computed for ``f~ = f / eta^(2 k0)``, which satisfies
``theta^2 f~ - (1/6) E2 theta f~ - k1 E4 f~ = 0``, and then multiplied back by
the eta power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Literal

from .forms import form_cache, serre_derivative
from .rational import ParameterError, RationalLike, as_rational, format_rational
from .series import QExpansion, _CommonDenominator, mul_series, theta

Root = Literal["m1", "m2"]
ProgressFn = Callable[[int, int], None]


class ScalarRepresentationError(ParameterError):
    """``m1 - m2`` is an integer (Q = 1): T acts by a scalar and Q >= 2 fails."""


@dataclass(frozen=True)
class MLDEParams:
    m1: Fraction
    m2: Fraction
    P: int
    Q: int
    k0: int
    k1: Fraction
    a: Fraction
    b: Fraction
    c: Fraction

    def exponent(self, root: Root) -> Fraction:
        return self.m1 if root == "m1" else self.m2

    def to_json(self) -> dict:
        return {
            "m1": format_rational(self.m1),
            "m2": format_rational(self.m2),
            "P": self.P,
            "Q": self.Q,
            "k0": self.k0,
            "k1": format_rational(self.k1),
            "a": format_rational(self.a),
            "b": format_rational(self.b),
            "c": format_rational(self.c),
        }

    @classmethod
    def from_json(cls, data: dict) -> MLDEParams:
        return derive_params(data["m1"], data["m2"])


def derive_params(m1: RationalLike, m2: RationalLike) -> MLDEParams:
    """Weight, accessory parameter and hypergeometric parameters for exponents ``m1, m2``."""
    m1, m2 = as_rational(m1), as_rational(m2)
    d = m1 - m2
    if d.denominator == 1:
        raise ScalarRepresentationError(f"m1 - m2 = {d} is an integer: Q = 1")
    k0 = 6 * (m1 + m2) - 1
    if k0.denominator != 1:
        raise ParameterError(f"k0 = 6(m1 + m2) - 1 = {k0} is not an integer")
    return MLDEParams(
        m1=m1,
        m2=m2,
        P=d.numerator,
        Q=d.denominator,
        k0=int(k0),
        k1=(36 * d * d - 1) / 144,
        a=Fraction(1, 12) + d / 2,
        b=Fraction(1, 12) - d / 2,
        c=Fraction(2, 3),
    )


def indicial_roots(params: MLDEParams) -> tuple[Fraction, Fraction]:
    """Roots of ``x^2 - x/6 - k1``, larger first when the discriminant is positive.

    The discriminant is ``1/36 + 4 k1 = (m1 - m2)^2`` so the roots are rational:
    ``1/12 +- (m1 - m2)/2``.
    """
    disc = Fraction(1, 36) + 4 * params.k1
    r = _rational_sqrt(disc)
    x1 = Fraction(1, 12) + r / 2
    x2 = Fraction(1, 12) - r / 2
    # Order the pair to line up with (a, b), i.e. with the sign of m1 - m2.
    if params.P < 0:
        x1, x2 = x2, x1
    return x1, x2


def _rational_sqrt(x: Fraction) -> Fraction:
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n != x.numerator or d * d != x.denominator:
        raise ArithmeticError(f"{x} is not a rational square")
    return Fraction(n, d)


def tilde_solution(
    params: MLDEParams, root: Root, order: int, progress: ProgressFn | None = None
) -> QExpansion:
    """Frobenius series ``f~ = q^mu (1 + ...)`` with ``mu = m_i - k0/12``.

    The coefficient recursion is the theta-form equation read off at ``q^(mu+n)``:

        ((mu+n)^2 - (mu+n)/6 - k1) a_n
            = sum_{k=1}^{n} ((1/6) E2_k (mu+n-k) + k1 E4_k) a_{n-k}.

    Scaling by ``144 Q^2`` makes every weight an integer; the indicial factor
    collapses to ``n (Qn +- P) / Q``.
    """
    if params.Q < 2:
        raise ScalarRepresentationError("Q must be >= 2")
    P, Q = params.P, params.Q
    sign = 1 if root == "m1" else -1
    mu = params.a if root == "m1" else params.b
    assert mu == params.exponent(root) - Fraction(params.k0, 12)
    forms = form_cache(order)
    e2 = forms.E2.integer_numerators
    e4 = forms.E4.integer_numerators
    c4 = 36 * P * P - Q * Q
    base = Q + sign * 6 * P  # 12 Q mu
    acc = _CommonDenominator(Fraction(1))
    for n in range(1, order + 1):
        nums = acc.nums
        s = 0
        for k in range(1, n + 1):
            t = base + 12 * Q * (n - k)
            s += (2 * Q * e2[k] * t + c4 * e4[k]) * nums[n - k]
        indicial = 144 * Q * n * (Q * n + sign * P)
        assert indicial != 0, "vanishing indicial factor"
        acc.push(s, indicial)
        if progress is not None:
            progress(n, order)
    return QExpansion._from_ints(acc.nums, acc.den, mu, order)


def frobenius_solve(
    params: MLDEParams, root: Root, order: int, progress: ProgressFn | None = None
) -> QExpansion:
    """Normalized solution ``q^{m_i} (1 + ...)`` of the full equation."""
    ft = tilde_solution(params, root, order, progress)
    f = mul_series(form_cache(order).eta(2 * params.k0), ft)
    lead = f[0]
    return f if lead == 1 else f.scale(1 / lead)


def direct_solve(params: MLDEParams, root: Root, order: int) -> QExpansion:
    """Frobenius recursion on the untransformed equation.

    Expanding the two Serre derivatives gives
    ``theta^2 f + A theta f + B f = 0`` with
    ``A = -((k0+1)/6) E2`` and
    ``B = -(k0/12) theta(E2) + (k0(k0+2)/144) E2^2 - k1 E4``.
    Slow (plain fractions); kept as an independent check of :func:`frobenius_solve`.
    """
    if params.Q < 2:
        raise ScalarRepresentationError("Q must be >= 2")
    forms = form_cache(order)
    k0 = Fraction(params.k0)
    e2 = forms.E2
    A = e2.scale(-(k0 + 1) / 6)
    B = (
        theta(e2).scale(-k0 / 12)
        + mul_series(e2, e2).scale(k0 * (k0 + 2) / 144)
        - forms.E4.scale(params.k1)
    )
    ac = [A.coefficient_at(i) for i in range(order + 1)]
    bc = [B.coefficient_at(i) for i in range(order + 1)]
    m = params.exponent(root)

    def indicial(x: Fraction, k: int) -> Fraction:
        return (x * x if k == 0 else 0) + ac[k] * x + bc[k]

    coeffs = [Fraction(1)]
    for n in range(1, order + 1):
        s = sum(indicial(m + n - k, k) * coeffs[n - k] for k in range(1, n + 1))
        coeffs.append(-s / indicial(m + n, 0))
    return QExpansion(coeffs, m, order)


def mlde_residual(f: QExpansion, params: MLDEParams, order: int | None = None) -> QExpansion:
    """``D_{k0+2}(D_{k0} f) - k1 E4 f``; the zero series certifies a solution."""
    if f.is_zero:
        return f
    if order is None:
        order = f.order
    f = f.truncate(order)
    g = serre_derivative(f, params.k0, order)
    g = serre_derivative(g, params.k0 + 2, order)
    return g - mul_series(form_cache(order).E4, f).scale(params.k1)


def theta_form_residual(ft: QExpansion, params: MLDEParams, order: int | None = None) -> QExpansion:
    """``theta^2 f~ - (1/6) E2 theta f~ - k1 E4 f~`` for the eta-stripped series."""
    if ft.is_zero:
        return ft
    if order is None:
        order = ft.order
    ft = ft.truncate(order)
    forms = form_cache(order)
    d1 = theta(ft)
    return theta(d1) - mul_series(forms.E2, d1).scale(Fraction(1, 6)) - mul_series(forms.E4, ft).scale(params.k1)


@dataclass(frozen=True)
class SolutionPair:
    f1: QExpansion
    f2: QExpansion
    params: MLDEParams
    method: Literal["frobenius", "hypergeometric"]

    def component(self, which: str) -> QExpansion:
        return self.f1 if which == "f1" else self.f2


def solve_pair(params: MLDEParams, order: int) -> SolutionPair:
    return SolutionPair(
        frobenius_solve(params, "m1", order), frobenius_solve(params, "m2", order), params, "frobenius"
    )

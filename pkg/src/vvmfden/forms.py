"""q-expansions of E2, E4, E6, eta powers, Delta and j, and the Serre derivative."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .rational import ParameterError, RationalLike, as_rational
from .series import QExpansion, invert, mul_series, theta

# 2 / zeta(1 - k) for k = 2, 4, 6.
EISENSTEIN_CONSTANTS = {2: -24, 4: 240, 6: -504}


def divisor_sigma(k: int, n: int) -> int:
    """Sum of ``d**k`` over the positive divisors ``d`` of ``n``."""
    if n < 1:
        raise ParameterError("n must be positive")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d**k
            if d * d != n:
                total += (n // d) ** k
        d += 1
    return total


def _sigma_table(k: int, n: int) -> list[int]:
    table = [0] * (n + 1)
    for d in range(1, n + 1):
        dk = d**k
        for m in range(d, n + 1, d):
            table[m] += dk
    return table


def eisenstein(k: int, order: int) -> QExpansion:
    """Normalized Eisenstein series ``E_k`` for ``k`` in {2, 4, 6}."""
    if k not in EISENSTEIN_CONSTANTS:
        raise ParameterError(f"unsupported Eisenstein weight {k}")
    c = EISENSTEIN_CONSTANTS[k]
    sig = _sigma_table(k - 1, order)
    return QExpansion._from_ints([1] + [c * s for s in sig[1:]], 1, Fraction(0), order)


def euler_product(order: int) -> list[int]:
    """Coefficients of ``prod_{n>=1} (1 - q^n)`` through ``q^order`` (pentagonal numbers)."""
    out = [0] * (order + 1)
    out[0] = 1
    k = 1
    while True:
        sign = -1 if k % 2 else 1
        p1 = k * (3 * k - 1) // 2
        p2 = k * (3 * k + 1) // 2
        if p1 > order:
            break
        out[p1] += sign
        if p2 <= order:
            out[p2] += sign
        k += 1
    return out


def _int_power(base: list[int], w: int) -> list[int]:
    """``base ** w`` for an integer series with constant term 1 (any integer ``w``)."""
    n = len(base) - 1
    out = [1] + [0] * n
    for m in range(1, n + 1):
        s = sum(((w + 1) * i - m) * b * g for i, b, g in zip(range(1, m + 1), base[1 : m + 1], reversed(out[:m])))
        q, r = divmod(s, m)
        assert r == 0, "eta power coefficient failed to be integral"
        out[m] = q
    return out


def eta_power(w: int, order: int) -> QExpansion:
    """``eta(q)**w = q^(w/24) prod (1 - q^n)^w`` to the given relative order."""
    return QExpansion._from_ints(_int_power(euler_product(order), w), 1, Fraction(w, 24), order)


@dataclass
class FormCache:
    """Classical q-expansions, all valid to relative order ``order``."""

    order: int
    E2: QExpansion = field(init=False)
    E4: QExpansion = field(init=False)
    E6: QExpansion = field(init=False)
    delta: QExpansion = field(init=False)
    j: QExpansion = field(init=False)
    j_inverse: QExpansion = field(init=False)
    _eta: dict = field(init=False, default_factory=dict, repr=False)

    def __post_init__(self):
        n = self.order
        self.E2 = eisenstein(2, n)
        self.E4 = eisenstein(4, n)
        self.E6 = eisenstein(6, n)
        self.delta = self.eta(24)
        e4cubed = mul_series(mul_series(self.E4, self.E4), self.E4)
        self.j = mul_series(e4cubed, invert(self.delta))
        self.j_inverse = invert(self.j)

    def eta(self, w: int) -> QExpansion:
        if w not in self._eta:
            self._eta[w] = eta_power(w, self.order)
        return self._eta[w]


@lru_cache(maxsize=4)
def form_cache(order: int) -> FormCache:
    return FormCache(order)


def j_series(order: int) -> QExpansion:
    return form_cache(order).j


def j_inverse(order: int) -> QExpansion:
    return form_cache(order).j_inverse


def serre_derivative(f: QExpansion, k: RationalLike, order: int | None = None) -> QExpansion:
    """``D_k f = theta(f) - (k/12) E2 f``."""
    k = as_rational(k)
    if order is None:
        order = f.order
    df = theta(f)
    if k == 0 or f.is_zero:
        return df
    e2 = form_cache(order).E2
    return df - mul_series(e2, f).scale(k / 12)

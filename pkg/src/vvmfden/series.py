"""Truncated Puiseux q-series with exact rational coefficients.

A :class:`QExpansion` stands for ``q^h * sum_{n=0}^{N} c_n q^(n/e)`` where
``h`` is rational, ``e >= 1`` is the ramification of the exponent lattice and
``N`` is the (relative) order: coefficients beyond index ``N`` are unknown.
Coefficients are held as one integer array over a single positive common
denominator so that convolutions never touch per-term gcds.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from operator import mul
from typing import Iterable, Sequence

from .rational import RationalLike, as_rational, format_rational, parse_rational


class SeriesDomainError(ArithmeticError):
    """An operation was asked for outside its domain (e.g. inverting zero)."""


def _normalize_ints(nums: list[int], den: int) -> tuple[list[int], int]:
    if den < 0:
        nums = [-x for x in nums]
        den = -den
    g = den
    for x in nums:
        if x:
            g = math.gcd(g, x)
            if g == 1:
                return nums, den
    if g > 1:
        nums = [x // g for x in nums]
        den //= g
    return nums, den


def _convolve(a: Sequence[int], b: Sequence[int], n_out: int) -> list[int]:
    """First ``n_out`` terms of the Cauchy product of two integer sequences."""
    n_out = min(n_out, len(a) + len(b) - 1)
    if n_out <= 0:
        return []
    a = list(a[:n_out])
    b = list(b[:n_out])
    a += [0] * (n_out - len(a))
    b += [0] * (n_out - len(b))
    brev = b[::-1]
    top = n_out - 1
    return [sum(map(mul, a[: n + 1], brev[top - n :])) for n in range(n_out)]


class _CommonDenominator:
    """Grow a sequence of rationals stored as integers over one shared denominator.

    ``push(s, d)`` appends ``s / (d * den)`` where ``den`` is the current shared
    denominator, so a recurrence can form ``s`` from the stored integer
    numerators directly.
    """

    __slots__ = ("nums", "den")

    def __init__(self, first: Fraction):
        self.nums = [first.numerator]
        self.den = first.denominator

    def push(self, s: int, d: int) -> None:
        full = self.den * d
        if full < 0:
            s, full = -s, -full
        g = math.gcd(s, full)
        num, den = s // g, full // g
        grow = den // math.gcd(self.den, den)
        if grow > 1:
            self.nums = [x * grow for x in self.nums]
            self.den *= grow
        self.nums.append(num * (self.den // den))

    def __len__(self) -> int:
        return len(self.nums)


class QExpansion:
    """Immutable truncated Puiseux series in ``q``."""

    __slots__ = ("_h", "_e", "_order", "_nums", "_den", "_vt", "_cache")

    def __init__(
        self,
        coefficients: Iterable[RationalLike],
        leading_exponent: RationalLike = 0,
        order: int | None = None,
        ramification: int = 1,
    ):
        coeffs = [as_rational(c) for c in coefficients]
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("order must be >= 0")
        # A short list is a polynomial: the missing coefficients are zero.
        coeffs = coeffs[: order + 1] + [Fraction(0)] * (order + 1 - len(coeffs))
        den = 1
        for c in coeffs:
            den = math.lcm(den, c.denominator)
        nums = [c.numerator * (den // c.denominator) for c in coeffs]
        self._set(nums, den, as_rational(leading_exponent), order, int(ramification))

    # -- construction -------------------------------------------------

    @classmethod
    def _from_ints(
        cls, nums: Sequence[int], den: int, h: Fraction, order: int, e: int = 1
    ) -> QExpansion:
        obj = cls.__new__(cls)
        obj._set(list(nums[: order + 1]), den, Fraction(h), order, e)
        return obj

    def _set(self, nums: list[int], den: int, h: Fraction, order: int, e: int) -> None:
        if e < 1:
            raise ValueError("ramification must be >= 1")
        if den == 0:
            raise ZeroDivisionError("zero common denominator")
        self._e = e
        self._cache = None
        shift = 0
        while shift < len(nums) and nums[shift] == 0:
            shift += 1
        if shift == len(nums):
            self._h = Fraction(0)
            self._order = 0
            self._nums = ()
            self._den = 1
            self._vt = h + Fraction(order, e)
            return
        nums, den = _normalize_ints(nums[shift:], den)
        self._h = h + Fraction(shift, e)
        self._order = order - shift
        self._nums = tuple(nums)
        self._den = den
        self._vt = self._h + Fraction(self._order, e)

    @classmethod
    def zero(cls, valid_through: RationalLike | float = math.inf) -> QExpansion:
        """The zero series, known to vanish for all exponents ``<= valid_through``."""
        obj = cls.__new__(cls)
        obj._e = 1
        obj._cache = None
        obj._h = Fraction(0)
        obj._order = 0
        obj._nums = ()
        obj._den = 1
        obj._vt = valid_through if valid_through == math.inf else as_rational(valid_through)
        return obj

    @classmethod
    def one(cls, order: int) -> QExpansion:
        return cls._from_ints([1] + [0] * order, 1, Fraction(0), order)

    @classmethod
    def monomial(cls, exponent: RationalLike, order: int, coefficient: RationalLike = 1) -> QExpansion:
        c = as_rational(coefficient)
        return cls._from_ints(
            [c.numerator] + [0] * order, c.denominator, as_rational(exponent), order
        )

    # -- accessors ------------------------------------------------------

    @property
    def leading_exponent(self) -> Fraction:
        return self._h

    @property
    def ramification(self) -> int:
        return self._e

    @property
    def order(self) -> int:
        return self._order

    @property
    def valid_through(self):
        """Largest exponent whose coefficient is known (``math.inf`` for exact zero)."""
        return self._vt

    @property
    def is_zero(self) -> bool:
        return not self._nums

    @property
    def integer_numerators(self) -> tuple[int, ...]:
        return self._nums

    @property
    def common_denominator(self) -> int:
        return self._den

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        if self._cache is None:
            self._cache = tuple(Fraction(x, self._den) for x in self._nums)
        return self._cache

    def __getitem__(self, n: int) -> Fraction:
        return self.coefficients[n]

    def __len__(self) -> int:
        return len(self._nums)

    def coefficient_at(self, exponent: RationalLike) -> Fraction:
        """Coefficient of ``q^exponent``; raises if the exponent is past the valid range."""
        x = as_rational(exponent)
        if x > self._vt:
            raise IndexError(f"q^{x} is beyond the known range (valid through {self._vt})")
        if self.is_zero:
            return Fraction(0)
        k = (x - self._h) * self._e
        if k < 0 or k.denominator != 1:
            return Fraction(0)
        return self.coefficients[int(k)]

    def terms(self) -> list[tuple[Fraction, Fraction]]:
        """Nonzero ``(exponent, coefficient)`` pairs."""
        step = Fraction(1, self._e)
        return [(self._h + i * step, c) for i, c in enumerate(self.coefficients) if c]

    # -- lattice helpers ----------------------------------------------------

    def lift(self, e: int) -> QExpansion:
        """Same series on the finer exponent lattice ``(1/e) Z``; ``e`` must be a multiple."""
        if e % self._e:
            raise ValueError("new ramification must be a multiple of the old one")
        if e == self._e or self.is_zero:
            return self
        k = e // self._e
        nums = [0] * (self._order * k + 1)
        nums[::k] = self._nums
        return QExpansion._from_ints(nums, self._den, self._h, self._order * k, e)

    def truncate(self, order: int) -> QExpansion:
        if self.is_zero or order >= self._order:
            return self
        if order < 0:
            return QExpansion.zero(self._h - Fraction(1, self._e))
        return QExpansion._from_ints(self._nums[: order + 1], self._den, self._h, order, self._e)

    # -- ring operations ------------------------------------------------------

    def __neg__(self) -> QExpansion:
        if self.is_zero:
            return self
        return QExpansion._from_ints([-x for x in self._nums], self._den, self._h, self._order, self._e)

    def scale(self, c: RationalLike) -> QExpansion:
        c = as_rational(c)
        if c == 0:
            return QExpansion.zero(self._vt) if not self.is_zero else self
        if self.is_zero:
            return self
        return QExpansion._from_ints(
            [x * c.numerator for x in self._nums], self._den * c.denominator, self._h, self._order, self._e
        )

    def shift(self, exponent: RationalLike) -> QExpansion:
        """Multiply by ``q^exponent``."""
        x = as_rational(exponent)
        if self.is_zero:
            return QExpansion.zero(self._vt + x)
        return QExpansion._from_ints(self._nums, self._den, self._h + x, self._order, self._e)

    def _coerce(self, other) -> QExpansion:
        if isinstance(other, QExpansion):
            return other
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return QExpansion.zero()
            return QExpansion._from_ints([c.numerator], c.denominator, Fraction(0), 0).with_precision(math.inf)
        return NotImplemented

    def with_precision(self, valid_through) -> QExpansion:
        """Exact polynomial support: pad with known zeros up to ``valid_through``.

        Only used for constants, which are exact to every order.
        """
        obj = QExpansion.__new__(QExpansion)
        obj._h, obj._e, obj._order = self._h, self._e, self._order
        obj._nums, obj._den, obj._cache = self._nums, self._den, None
        obj._vt = valid_through
        return obj

    def __add__(self, other) -> QExpansion:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other) -> QExpansion:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return add(self, -other)

    def __rsub__(self, other) -> QExpansion:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return add(other, -self)

    def __mul__(self, other) -> QExpansion:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, QExpansion):
            return NotImplemented
        return mul_series(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> QExpansion:
        return pow_rational(self, Fraction(k))

    def __truediv__(self, other) -> QExpansion:
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / Fraction(other))
        if not isinstance(other, QExpansion):
            return NotImplemented
        return mul_series(self, invert(other))

    def __eq__(self, other) -> bool:
        if not isinstance(other, QExpansion):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero and self._vt == other._vt
        e = math.lcm(self._e, other._e)
        a, b = self.lift(e), other.lift(e)
        return (a._h, a._order, a._nums, a._den) == (b._h, b._order, b._nums, b._den)

    def __hash__(self):
        return hash((self._h, self._order, self._nums, self._den, self._e))

    def agrees_with(self, other: QExpansion) -> bool:
        """Coefficientwise equality on the range where both are known."""
        diff = add(self, -other)
        return diff.is_zero

    def __repr__(self) -> str:
        if self.is_zero:
            return f"QExpansion.zero(valid_through={self._vt})"
        shown = ", ".join(format_rational(c) for c in self.coefficients[:6])
        more = ", ..." if len(self) > 6 else ""
        ram = f", ramification={self._e}" if self._e != 1 else ""
        return f"QExpansion(q^{self._h} * [{shown}{more}], order={self._order}{ram})"

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        out: dict = {
            "leading_exponent": format_rational(self._h),
            "order": self._order,
            "coefficients": [format_rational(c) for c in self.coefficients],
        }
        if self._e != 1:
            out["ramification"] = self._e
        if self.is_zero:
            out["valid_through"] = "inf" if self._vt == math.inf else format_rational(self._vt)
        return out

    @classmethod
    def from_json(cls, data: dict) -> QExpansion:
        coeffs = data["coefficients"]
        if not coeffs:
            vt = data.get("valid_through", "inf")
            return cls.zero(math.inf if vt == "inf" else parse_rational(vt))
        return cls(
            [parse_rational(c) for c in coeffs],
            parse_rational(data["leading_exponent"]),
            int(data["order"]),
            int(data.get("ramification", 1)),
        )


# -- free functions (the module's public operations) ------------------------------


def add(f: QExpansion, g: QExpansion) -> QExpansion:
    """Exact sum, truncated where either summand stops being known."""
    vt = min(f.valid_through, g.valid_through)
    if f.is_zero and g.is_zero:
        return QExpansion.zero(vt)
    if f.is_zero or g.is_zero:
        s = g if f.is_zero else f
        if vt == math.inf:
            return s
        return _truncate_abs(s, vt)
    d = g.leading_exponent - f.leading_exponent
    e = math.lcm(f.ramification, g.ramification, d.denominator)
    f, g = f.lift(e), g.lift(e)
    h = min(f.leading_exponent, g.leading_exponent)
    if vt == math.inf:
        # Only constants carry infinite precision; pad them to the other operand.
        vt = max(f.leading_exponent + Fraction(f.order, e), g.leading_exponent + Fraction(g.order, e))
    span = (vt - h) * e
    if span < 0:
        return QExpansion.zero(vt)
    n = int(span)
    den = math.lcm(f.common_denominator, g.common_denominator)
    out = [0] * (n + 1)
    for s in (f, g):
        off = int((s.leading_exponent - h) * e)
        k = den // s.common_denominator
        for i, x in enumerate(s.integer_numerators[: max(0, n + 1 - off)]):
            out[off + i] += x * k
    return QExpansion._from_ints(out, den, h, n, e)


def _truncate_abs(s: QExpansion, vt) -> QExpansion:
    span = (vt - s.leading_exponent) * s.ramification
    if span < 0:
        return QExpansion.zero(vt)
    return s.truncate(int(span))


def mul_series(f: QExpansion, g: QExpansion) -> QExpansion:
    """Cauchy product; exponents add and the relative order is the smaller one."""
    if f.is_zero and g.is_zero:
        return QExpansion.zero(f.valid_through + g.valid_through)
    if f.is_zero or g.is_zero:
        z, s = (f, g) if f.is_zero else (g, f)
        return QExpansion.zero(z.valid_through + s.leading_exponent)
    fin_f = f.valid_through != math.inf
    fin_g = g.valid_through != math.inf
    e = math.lcm(f.ramification, g.ramification)
    f, g = f.lift(e), g.lift(e)
    if fin_f and fin_g:
        n = min(f.order, g.order)
    elif fin_f:
        n = f.order
    elif fin_g:
        n = g.order
    else:
        n = f.order + g.order
    nums = _convolve(f.integer_numerators, g.integer_numerators, n + 1)
    nums += [0] * (n + 1 - len(nums))
    out = QExpansion._from_ints(
        nums, f.common_denominator * g.common_denominator, f.leading_exponent + g.leading_exponent, n, e
    )
    if not (fin_f or fin_g):
        out = out.with_precision(math.inf)
    return out


def invert(f: QExpansion) -> QExpansion:
    """Multiplicative inverse to the same relative order; the leading exponent negates."""
    if f.is_zero:
        raise SeriesDomainError("cannot invert the zero series")
    u = f.integer_numerators
    u0 = u[0]
    n = f.order
    # Solve (u/u0) * v = 1 with v_0 = 1; then 1/f = v * den / u0.
    acc = _CommonDenominator(Fraction(1))
    for k in range(1, n + 1):
        s = -sum(map(mul, u[1 : k + 1], reversed(acc.nums)))
        acc.push(s, u0)
    return QExpansion._from_ints(
        [x * f.common_denominator for x in acc.nums], acc.den * u0, -f.leading_exponent, n, f.ramification
    )


def pow_rational(u: QExpansion, alpha: RationalLike) -> QExpansion:
    """``u ** alpha`` via the binomial series of the unit part.

    For non-integral ``alpha`` the leading coefficient must be 1, otherwise an
    irrational scalar would appear.
    """
    alpha = as_rational(alpha)
    if u.is_zero:
        if alpha > 0:
            return QExpansion.zero(u.valid_through * alpha if u.valid_through != math.inf else math.inf)
        raise SeriesDomainError("zero series to a non-positive power")
    nums, den = u.integer_numerators, u.common_denominator
    lead = Fraction(nums[0], den)
    if alpha.denominator != 1 and lead != 1:
        raise SeriesDomainError("fractional power needs a series with leading coefficient 1")
    n = u.order
    h = u.leading_exponent * alpha
    if alpha == 0:
        return QExpansion._from_ints([1] + [0] * n, 1, Fraction(0), n, u.ramification)
    # Monic unit m = nums / nums[0]; g = m^alpha satisfies
    # k g_k = sum_{i=1}^k ((alpha + 1) i - k) m_i g_{k-i}.
    s_, t_ = alpha.numerator, alpha.denominator
    acc = _CommonDenominator(Fraction(1))
    for k in range(1, n + 1):
        rev = reversed(acc.nums)
        s = sum(((s_ + t_) * i - k * t_) * x * y for i, x, y in zip(range(1, k + 1), nums[1 : k + 1], rev))
        acc.push(s, k * t_ * nums[0])
    out = QExpansion._from_ints(acc.nums, acc.den, h, n, u.ramification)
    if lead != 1:
        out = out.scale(lead ** int(alpha))
    return out


def theta(f: QExpansion) -> QExpansion:
    """``q d/dq``: the coefficient of ``q^x`` is multiplied by ``x``."""
    if f.is_zero:
        return f
    h, e = f.leading_exponent, f.ramification
    hn, hd = h.numerator, h.denominator
    nums = [x * (hn * e + i * hd) for i, x in enumerate(f.integer_numerators)]
    return QExpansion._from_ints(nums, f.common_denominator * hd * e, h, f.order, e)


def compose(outer: Sequence[RationalLike], inner: QExpansion) -> QExpansion:
    """Evaluate the power series ``sum outer[n] z^n`` at ``z = inner``.

    ``inner`` must have leading exponent at least 1. The result is valid as far
    as both the truncation of ``inner`` and the number of ``outer`` terms allow.
    """
    outer = [as_rational(c) for c in outer]
    if not outer:
        raise ValueError("outer series needs at least one coefficient")
    if inner.is_zero:
        raise SeriesDomainError("composition with the zero series")
    if inner.leading_exponent < 1:
        raise SeriesDomainError("inner series must have leading exponent >= 1")
    e = math.lcm(inner.ramification, inner.leading_exponent.denominator)
    inner = inner.lift(e)
    v = int(inner.leading_exponent * e)
    r = min(v + inner.order, len(outer) * v - 1)
    unit = list(inner.integer_numerators)
    di = inner.common_denominator
    terms = [(c / Fraction(di) ** k, k) for k, c in enumerate(outer) if c and k * v <= r]
    big = 1
    for c, _ in terms:
        big = math.lcm(big, c.denominator)
    out = [0] * (r + 1)
    powers = _unit_powers(tuple(unit), v, r)
    for c, k in terms:
        w = c.numerator * (big // c.denominator)
        base = k * v
        for i, x in enumerate(powers[k]):
            out[base + i] += w * x
    return QExpansion._from_ints(out, big, Fraction(0), r, e)


@lru_cache(maxsize=8)
def _unit_powers(unit: tuple[int, ...], v: int, r: int) -> list[list[int]]:
    # entry k holds the unit part of inner^k on indices k*v .. r; shared by
    # repeated compositions with the same inner series (typically j^-1)
    powers = [[1] + [0] * r]
    k = 0
    while (k + 1) * v <= r:
        k += 1
        powers.append(_convolve(powers[-1], unit, r - k * v + 1))
    return powers

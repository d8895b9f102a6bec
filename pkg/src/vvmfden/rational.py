"""Exact rationals, p-adic valuations and small-prime utilities.

Rationals are plain :class:`fractions.Fraction` values; this module adds the
number-theoretic helpers the rest of the package needs on top of them.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Union

Rational = Fraction
RationalLike = Union[int, Fraction, str]

DEFAULT_PRIME_BOUND = 10**6

# Chunk size for the gcd-against-primorial screen in trial division.
_CHUNK = 256

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


class ParameterError(ValueError):
    """Raised when an argument violates a documented precondition."""


class UnfactoredResidue(ArithmeticError):
    """Trial division up to the bound left a composite (or unproven) cofactor."""

    def __init__(self, residue: int, bound: int):
        super().__init__(f"unfactored residue {residue} after trial division to {bound}")
        self.residue = residue
        self.bound = bound


def as_rational(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"n/d"`` or ``"n"``; a leading ASCII or Unicode minus is accepted."""
    s = text.strip().replace("−", "-")
    if not s:
        raise ValueError("empty rational string")
    num, sep, den = s.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    if d == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(n, d)


def format_rational(r: Fraction | int) -> str:
    r = Fraction(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def is_prime(n: int) -> bool:
    """Miller-Rabin with the first 13 prime bases (deterministic below 3.3e24)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=8)
def _sieve(bound: int) -> tuple[int, ...]:
    if bound < 2:
        return ()
    flags = bytearray([1]) * (bound + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(bound) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, bound + 1, p)))
    return tuple(i for i, f in enumerate(flags) if f)


def primes_up_to(bound: int) -> tuple[int, ...]:
    """All primes ``p <= bound`` in increasing order."""
    return _sieve(int(bound))


@lru_cache(maxsize=8)
def _chunk_products(bound: int) -> tuple[tuple[int, int, int], ...]:
    primes = primes_up_to(bound)
    out = []
    for lo in range(0, len(primes), _CHUNK):
        hi = min(lo + _CHUNK, len(primes))
        out.append((lo, hi, math.prod(primes[lo:hi])))
    return tuple(out)


def _check_prime(p: int) -> None:
    if not isinstance(p, int) or p < 2 or not is_prime(p):
        raise ParameterError(f"{p!r} is not a prime")


def _int_valuation(n: int, p: int) -> int:
    e = 0
    # Square the divisor while it keeps dividing; keeps huge valuations cheap.
    while n % p == 0:
        pk, k = p, 1
        while n % (pk * pk) == 0:
            pk *= pk
            k *= 2
        n //= pk
        e += k
    return e


def padic_valuation(r: RationalLike, p: int) -> int | float:
    """Exponent of the prime ``p`` in ``r``; ``math.inf`` for zero."""
    _check_prime(p)
    r = as_rational(r)
    if r == 0:
        return math.inf
    return _int_valuation(r.numerator, p) - _int_valuation(r.denominator, p)


@dataclass(frozen=True)
class PrimeFactorization:
    """Signed-exponent factorization; primes strictly increasing."""

    factors: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        ps = [p for p, _ in self.factors]
        if any(a >= b for a, b in zip(ps, ps[1:])):
            raise ValueError("primes must be strictly increasing")
        if any(e == 0 for _, e in self.factors):
            raise ValueError("exponents must be nonzero")

    @classmethod
    def from_dict(cls, exps: dict[int, int]) -> PrimeFactorization:
        return cls(tuple(sorted((p, e) for p, e in exps.items() if e)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def value(self) -> Fraction:
        num = math.prod(p**e for p, e in self.factors if e > 0)
        den = math.prod(p ** (-e) for p, e in self.factors if e < 0)
        return Fraction(num, den)

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(f"{p}^{e}" if e != 1 else str(p) for p, e in self.factors)


def factor_integer(n: int, bound: int = DEFAULT_PRIME_BOUND) -> dict[int, int]:
    """Factor ``|n|`` by trial division with primes up to ``bound``.

    Chunks of primes are screened with one gcd against their product, so only
    chunks that share a factor with ``n`` are divided out one prime at a time.
    A cofactor ``r > 1`` left over is accepted as prime when ``r <= bound**2``
    (it then has no divisor up to its square root); otherwise
    :class:`UnfactoredResidue` is raised.
    """
    n = abs(n)
    if n == 0:
        raise ParameterError("cannot factor zero")
    out: dict[int, int] = {}
    if n == 1:
        return out
    primes = primes_up_to(bound)
    for lo, hi, prod in _chunk_products(bound):
        g = math.gcd(n, prod)
        if g == 1:
            continue
        for p in primes[lo:hi]:
            if g % p == 0:
                e = _int_valuation(n, p)
                out[p] = e
                n //= p**e
                if n == 1:
                    return out
    if n > 1:
        if n > bound * bound:
            raise UnfactoredResidue(n, bound)
        out[n] = 1
    return out


def factor_rational(
    r: RationalLike, bound: int = DEFAULT_PRIME_BOUND
) -> tuple[int, PrimeFactorization]:
    """Return ``(sign, factorization)`` with negative exponents for the denominator."""
    r = as_rational(r)
    if r == 0:
        raise ParameterError("cannot factor zero")
    exps = factor_integer(r.numerator, bound)
    for p, e in factor_integer(r.denominator, bound).items():
        exps[p] = -e
    return (1 if r > 0 else -1), PrimeFactorization.from_dict(exps)


def primes_in_progression(modulus: int, residue: int, bound: int) -> list[int]:
    """Primes ``p <= bound`` with ``p = residue (mod modulus)``, ascending."""
    if modulus < 1:
        raise ParameterError("modulus must be >= 1")
    if bound < 2:
        raise ParameterError("bound must be >= 2")
    r = residue % modulus
    return [p for p in primes_up_to(bound) if p % modulus == r]


def primes_between(lo: int, hi: int) -> list[int]:
    """Primes in the closed interval ``[lo, hi]``."""
    primes = primes_up_to(hi)
    return list(primes[bisect.bisect_left(primes, lo) :])


def lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v)
    return out

"""Exact denominators of coefficients 1000-1002 for exponents (3/10, 2/10).

Three observed factorizations are checked:

* coefficient 1000: ``3^2 * 13 * prod{p = 9 mod 10, p <= 10000}``
* coefficient 1001: ``3 * prod{p = 9 mod 10, p <= 10009}``
* coefficient 1002: ``13 * prod{p = 9 mod 10, p <= 10009, p != 919}``

They refer to a form "rescaled to have rational coefficients", so the match
allows one integer rescaling common to all three coefficients. For every
component and index convention the minimal such integer is solved for prime
by prime; an assignment matches when that integer exists.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .mlde import MLDEParams, derive_params, frobenius_solve
from .rational import PrimeFactorization, factor_integer, padic_valuation, primes_in_progression
from .series import QExpansion
from .verdict import Verdict

M1, M2 = Fraction(3, 10), Fraction(2, 10)
PROGRESSION = (10, 9)
ORDER = 1002


@dataclass(frozen=True)
class Claim:
    position: int
    extra: dict[int, int]
    limit: int
    omitted: tuple[int, ...] = ()

    def expected(self) -> dict[int, int]:
        out = dict(self.extra)
        for p in primes_in_progression(*PROGRESSION, self.limit):
            if p not in self.omitted:
                out[p] = out.get(p, 0) + 1
        return out


CLAIMS = (
    Claim(1000, {3: 2, 13: 1}, 10000),
    Claim(1001, {3: 1}, 10009),
    Claim(1002, {13: 1}, 10009, (919,)),
)


def minimal_rescaling(coeffs: list[Fraction], targets: list[dict[int, int]]) -> dict[int, int] | None:
    """Smallest integer ``c`` (as a factorization) giving ``den(c * a_i) = target_i`` for all ``i``.

    Returns ``None`` when no integer works. Only primes in some denominator or
    some target can constrain ``c``.
    """
    dens = [factor_integer(c.denominator) for c in coeffs]
    primes = set()
    for d, t in zip(dens, targets):
        primes.update(d)
        primes.update(t)
    scale = {}
    for p in sorted(primes):
        fixed = set()
        lower = 0
        for c, t in zip(coeffs, targets):
            v = padic_valuation(c, p)
            want = t.get(p, 0)
            if want > 0:
                fixed.add(-want - v)
            else:
                lower = max(lower, -v)
        if len(fixed) > 1:
            return None
        if fixed:
            v = fixed.pop()
            if v < lower:
                return None
        else:
            v = lower
        if v:
            scale[p] = v
    return scale


@dataclass
class Assignment:
    component: str
    offset: int
    scale: dict[int, int] | None
    observed: list[dict[int, int]]

    @property
    def matches(self) -> bool:
        return self.scale is not None

    @property
    def matches_unscaled(self) -> bool:
        return self.scale == {}

    def to_json(self) -> dict:
        return {
            "component": self.component,
            "offset": self.offset,
            "indices": [c.position - self.offset for c in CLAIMS],
            "matches": self.matches,
            "matches_without_rescaling": self.matches_unscaled,
            "rescaling": None if self.scale is None else str(PrimeFactorization.from_dict(self.scale)),
            "rescaling_value": None if self.scale is None else math.prod(p**e for p, e in self.scale.items()),
            "observed": [_describe(o) for o in self.observed],
        }


def _describe(den: dict[int, int]) -> dict:
    mod, r = PROGRESSION
    prog = sorted(p for p in den if p % mod == r)
    off = {p: e for p, e in sorted(den.items()) if p % mod != r}
    squared = [p for p in prog if den[p] > 1]
    top = prog[-1] if prog else None
    missing = [p for p in primes_in_progression(mod, r, top) if p not in den] if top else []
    return {
        "off_progression": str(PrimeFactorization.from_dict(off)),
        "progression_count": len(prog),
        "largest_progression_prime": top,
        "missing_progression_primes": missing,
        "progression_primes_squared": squared,
    }


@dataclass
class ReproductionReport:
    params: MLDEParams
    order: int
    assignments: list[Assignment]
    sanity: Verdict
    chosen: Assignment | None = field(default=None)

    @property
    def passed(self) -> bool:
        return self.chosen is not None and self.sanity.passed

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "order": self.order,
            "claims": [
                {"position": c.position, "extra": {str(p): e for p, e in c.extra.items()}, "limit": c.limit, "omitted": list(c.omitted)}
                for c in CLAIMS
            ],
            "assignments": [a.to_json() for a in self.assignments],
            "chosen": self.chosen.to_json() if self.chosen else None,
            "matching_assignments": sum(a.matches for a in self.assignments),
            "sanity": self.sanity.to_json(),
            "pass": self.passed,
        }


def _solve(args: tuple[Fraction, Fraction, str, int]) -> QExpansion:
    m1, m2, root, order = args
    return frobenius_solve(derive_params(m1, m2), root, order)


def compute_components(
    order: int = ORDER, jobs: int = 1, progress: Callable[[int, int], None] | None = None
) -> dict[str, QExpansion]:
    params = derive_params(M1, M2)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, 2)) as pool:
            f1, f2 = pool.map(_solve, [(M1, M2, "m1", order), (M1, M2, "m2", order)])
    else:
        f1 = frobenius_solve(params, "m1", order, progress)
        f2 = frobenius_solve(params, "m2", order, progress)
    return {"f1": f1, "f2": f2}


def sanity_checks(components: dict[str, QExpansion], chosen: Assignment | None) -> Verdict:
    v = Verdict("reproduction sanity")
    f1, f2 = components["f1"], components["f2"]
    v.add("f1 coefficient 1 has 11-adic valuation -1", -1, padic_valuation(f1[1], 11))
    first19 = next((n for n, c in enumerate(f2.coefficients) if c.denominator % 19 == 0), None)
    v.add("19 first enters f2 at index 2", 2, first19)
    v.add("f2 coefficient 2 has 19-adic valuation -1", -1, padic_valuation(f2[2], 19))
    if chosen is not None:
        for claim, den in zip(CLAIMS, chosen.observed):
            scaled = {p: e - chosen.scale.get(p, 0) for p, e in den.items()}
            off = {p: e for p, e in scaled.items() if e > 0 and p % PROGRESSION[0] != PROGRESSION[1]}
            ok = set(off) <= {3, 13} and all(e <= 2 for e in off.values())
            v.add(
                f"coefficient {claim.position}: off-progression factors within 3^2*13",
                True,
                ok,
            )
    return v


def reproduce(
    order: int = ORDER,
    jobs: int = 1,
    progress: Callable[[int, int], None] | None = None,
    components: dict[str, QExpansion] | None = None,
) -> ReproductionReport:
    if order < max(c.position for c in CLAIMS):
        raise ValueError(f"order must be at least {max(c.position for c in CLAIMS)}")
    params = derive_params(M1, M2)
    if components is None:
        components = compute_components(order, jobs, progress)
    targets = [c.expected() for c in CLAIMS]
    assignments = []
    for name in ("f1", "f2"):
        series = components[name]
        for offset in (0, 1):
            coeffs = [series[c.position - offset] for c in CLAIMS]
            observed = [factor_integer(c.denominator) for c in coeffs]
            assignments.append(Assignment(name, offset, minimal_rescaling(coeffs, targets), observed))
    matching = [a for a in assignments if a.matches]
    chosen = matching[0] if matching else None
    return ReproductionReport(params, order, assignments, sanity_checks(components, chosen), chosen)

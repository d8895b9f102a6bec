"""Denominator structure of q-expansion coefficients.

Factorizes coefficient denominators, tracks when each prime first enters,
certifies the valuation -1 phenomenon at progression primes and applies a
stabilization heuristic for bounded denominators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .mlde import MLDEParams, frobenius_solve
from .rational import (
    DEFAULT_PRIME_BOUND,
    ParameterError,
    UnfactoredResidue,
    factor_integer,
    padic_valuation,
    primes_up_to,
)
from .series import QExpansion
from .verdict import Verdict


@dataclass(frozen=True)
class IndexEntry:
    n: int
    denominator_factors: tuple[tuple[int, int], ...]
    progression_hits: tuple[tuple[int, int], ...]
    unfactored: int | None = None

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "denominator_factors": [list(f) for f in self.denominator_factors],
            "progression_hits": [list(h) for h in self.progression_hits],
        }
        if self.unfactored is not None:
            out["unfactored"] = self.unfactored
        return out

    @classmethod
    def from_json(cls, data: dict) -> IndexEntry:
        return cls(
            data["n"],
            tuple(tuple(f) for f in data["denominator_factors"]),
            tuple(tuple(h) for h in data["progression_hits"]),
            data.get("unfactored"),
        )


@dataclass
class DenominatorReport:
    component: str
    order: int
    modulus: int
    residues: tuple[int, ...]
    per_index: list[IndexEntry]
    first_occurrence: dict[int, tuple[int, int]]
    lcm_prefix: list[int]
    params: MLDEParams | None = None

    @property
    def flagged(self) -> list[int]:
        return [e.n for e in self.per_index if e.unfactored is not None]

    def progression_primes(self) -> list[int]:
        return sorted(p for p in self.first_occurrence if p % self.modulus in self.residues)

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json() if self.params else None,
            "component": self.component,
            "order": self.order,
            "progression": {"Q": self.modulus, "residues": list(self.residues)},
            "per_index": [e.to_json() for e in self.per_index],
            "first_occurrence": {str(p): list(v) for p, v in sorted(self.first_occurrence.items())},
            "lcm_prefix": self.lcm_prefix,
        }

    @classmethod
    def from_json(cls, data: dict) -> DenominatorReport:
        prog = data["progression"]
        return cls(
            component=data["component"],
            order=data["order"],
            modulus=prog["Q"],
            residues=tuple(prog["residues"]),
            per_index=[IndexEntry.from_json(e) for e in data["per_index"]],
            first_occurrence={int(p): tuple(v) for p, v in data["first_occurrence"].items()},
            lcm_prefix=list(data["lcm_prefix"]),
            params=MLDEParams.from_json(data["params"]) if data.get("params") else None,
        )


def _factor_many(dens: Sequence[int], bound: int) -> list[tuple[dict[int, int], int | None]]:
    """Factor every denominator, sharing one factorization of their lcm when possible."""
    total = 1
    for d in dens:
        total = math.lcm(total, d)
    try:
        primes = sorted(factor_integer(total, bound))
    except UnfactoredResidue:
        primes = None
    out = []
    for d in dens:
        if primes is None:
            try:
                out.append((factor_integer(d, bound), None))
            except UnfactoredResidue as exc:
                out.append(({}, exc.residue))
            continue
        exps = {}
        for p in primes:
            if d % p == 0:
                e = 0
                while d % p == 0:
                    d //= p
                    e += 1
                exps[p] = e
        out.append((exps, None))
    return out


def analyze(
    series: QExpansion,
    modulus: int,
    residues: Sequence[int],
    *,
    component: str = "f",
    params: MLDEParams | None = None,
    bound: int = DEFAULT_PRIME_BOUND,
) -> DenominatorReport:
    """Per-coefficient denominator factorizations and progression bookkeeping.

    An index whose denominator cannot be fully factored within ``bound`` is
    flagged via ``IndexEntry.unfactored``; the rest of the report is still built.
    """
    if modulus < 1:
        raise ParameterError("modulus must be >= 1")
    res = tuple(sorted({r % modulus for r in residues}))
    coeffs = series.coefficients
    factored = _factor_many([c.denominator for c in coeffs], bound)
    per_index = []
    first: dict[int, tuple[int, int]] = {}
    lcm_prefix = []
    running = 1
    for n, (c, (exps, residue)) in enumerate(zip(coeffs, factored)):
        facs = tuple(sorted(exps.items()))
        hits = tuple((p, -e) for p, e in facs if p % modulus in res)
        per_index.append(IndexEntry(n, facs, hits, residue))
        for p, e in facs:
            first.setdefault(p, (n, -e))
        running = math.lcm(running, c.denominator)
        lcm_prefix.append(running)
    return DenominatorReport(
        component=component,
        order=series.order,
        modulus=modulus,
        residues=res,
        per_index=per_index,
        first_occurrence=first,
        lcm_prefix=lcm_prefix,
        params=params,
    )


def first_negative_valuation(series: QExpansion, p: int, limit: int | None = None) -> tuple[int, int] | None:
    """``(index, valuation)`` of the first coefficient with negative p-adic valuation."""
    coeffs = series.coefficients if limit is None else series.coefficients[: limit + 1]
    for n, c in enumerate(coeffs):
        if c.denominator % p == 0:
            return n, padic_valuation(c, p)
    return None


def certified_case(params: MLDEParams) -> tuple[str, str, int]:
    """``(root, component, shift)``: progression primes are ``p = Q n + shift`` on that component."""
    if params.P > 0:
        return "m1", "f1", params.P
    return "m2", "f2", -params.P


def verify_prop2(
    params: MLDEParams,
    prime_bound: int,
    order: int | None = None,
    series: QExpansion | None = None,
) -> Verdict:
    """Check that each progression prime first enters a denominator with valuation exactly -1.

    With ``m1 > m2`` f1 is examined at primes ``Qn + P``, otherwise f2 at
    primes ``Qn - P``. ``order`` defaults to the largest entry index needed.
    A prime whose entry index lies beyond the computed order is inconclusive.
    """
    if params.Q < 6:
        raise ParameterError("the progression certificate needs Q >= 6")
    root, component, shift = certified_case(params)
    Q = params.Q
    primes = [p for p in primes_up_to(prime_bound) if p > shift and (p - shift) % Q == 0]
    if order is None:
        order = max([(p - shift) // Q for p in primes], default=1)
    if series is None:
        series = frobenius_solve(params, root, order)
    verdict = Verdict(f"progression certificate {component} {Q}n{'+' if params.P > 0 else '-'}{abs(params.P)}")
    for p in primes:
        entry_index = (p - shift) // Q
        found = first_negative_valuation(series, p)
        desc = f"p={p} component={component} entry_index={entry_index}"
        if found is None:
            status = "inconclusive" if series.order < entry_index else "fail"
            if status == "inconclusive":
                desc += ": increase order"
            verdict.add(desc, -1, None, status)
            continue
        n, v = found
        verdict.add(f"{desc} first_index={n}", -1, v)
    return verdict


@dataclass(frozen=True)
class Classification:
    kind: str
    Q: int
    P: int
    component: str | None = None
    progression: tuple[int, int] | None = None

    def __str__(self) -> str:
        if self.kind == "congruence":
            return f"congruence: Q = {self.Q} <= 5 (bounded denominators expected)"
        mod, r = self.progression
        sign = "+" if self.P > 0 else "-"
        return f"unbounded: Q = {self.Q} >= 6, progression {mod}n {sign} {abs(self.P)} on component {self.component}"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "Q": self.Q,
            "P": self.P,
            "component": self.component,
            "progression": list(self.progression) if self.progression else None,
            "summary": str(self),
        }


def classify(params: MLDEParams) -> Classification:
    """Which side of the ``Q <= 5`` / unbounded dichotomy the parameters fall on."""
    if params.Q < 2:
        raise ParameterError("Q = 1 lies outside the dichotomy")
    if params.Q <= 5:
        return Classification("congruence", params.Q, params.P)
    _, component, shift = certified_case(params)
    return Classification("unbounded", params.Q, params.P, component, (params.Q, shift % params.Q))


@dataclass
class BoundedResult:
    bounded: bool
    clearing_constant: int | None
    trace: list[tuple[int, int]] = field(default_factory=list)
    window_start: int = 0

    def to_json(self) -> dict:
        return {
            "status": "bounded" if self.bounded else "growing",
            "clearing_constant": self.clearing_constant,
            "window_start": self.window_start,
            "growth": [list(t) for t in self.trace],
        }


def bounded_check(series: QExpansion, window: float = 0.25) -> BoundedResult:
    """Heuristic: the running lcm of denominators must not change over the final window.

    ``trace`` lists ``(index, factor)`` for every index at which the lcm grew.
    """
    coeffs = series.coefficients
    if not coeffs:
        return BoundedResult(True, 1)
    span = max(1, math.ceil(window * len(coeffs)))
    start = len(coeffs) - span
    running = 1
    trace = []
    for n, c in enumerate(coeffs):
        new = math.lcm(running, c.denominator)
        if new != running:
            trace.append((n, new // running))
            running = new
    stable = not trace or trace[-1][0] < start
    return BoundedResult(stable, running if stable else None, trace, start)

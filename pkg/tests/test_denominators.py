from __future__ import annotations

import json
from fractions import Fraction

import pytest

from vvmfden.denominators import (
    DenominatorReport,
    analyze,
    bounded_check,
    classify,
    first_negative_valuation,
    verify_prop2,
)
from vvmfden.forms import eta_power
from vvmfden.mlde import derive_params, frobenius_solve
from vvmfden.rational import ParameterError
from vvmfden.series import QExpansion


def test_analyze_hand_built():
    s = QExpansion([1, Fraction(1, 3), Fraction(1, 9)], 0, 2)
    rep = analyze(s, 1, [0])
    assert rep.first_occurrence == {3: (1, -1)}
    assert rep.lcm_prefix == [1, 3, 9]
    assert rep.per_index[2].denominator_factors == ((3, 2),)


def test_analyze_integer_series():
    rep = analyze(eta_power(8, 30), 6, [1, 5])
    assert rep.first_occurrence == {}
    assert rep.lcm_prefix == [1] * 31


def test_analyze_progression_hits():
    p = derive_params("3/10", "2/10")
    f1 = frobenius_solve(p, "m1", 50)
    rep = analyze(f1, 10, [1, 9], component="f1", params=p)
    hits = rep.progression_primes()
    assert 11 in hits and all(q % 10 in (1, 9) for q in hits)
    assert rep.first_occurrence[11] == (1, -1)


def test_analyze_flags_unfactored():
    big = 1000003 * 1000033
    s = QExpansion([1, Fraction(1, big)], 0, 1)
    rep = analyze(s, 10, [1], bound=100)
    assert rep.flagged == [1]


def test_report_json_round_trip():
    p = derive_params("3/10", "2/10")
    rep = analyze(frobenius_solve(p, "m2", 30), 10, [9, 1], component="f2", params=p)
    data = json.loads(json.dumps(rep.to_json()))
    assert DenominatorReport.from_json(data).to_json() == data


def test_certificate_m1_larger():
    v = verify_prop2(derive_params("3/10", "2/10"), 101)
    assert v.passed
    assert len(v.cases) == 6


def test_certificate_m2_larger():
    v = verify_prop2(derive_params("2/10", "3/10"), 100)
    assert v.passed
    assert "f2" in v.suite
    assert all("component=f2" in c.description for c in v.cases)
    assert [c.description.split()[0] for c in v.cases] == ["p=11", "p=31", "p=41", "p=61", "p=71"]


def test_certificate_q6():
    v = verify_prop2(derive_params("1/2", "1/3"), 40)
    assert [c.description.split()[0] for c in v.cases] == ["p=7", "p=13", "p=19", "p=31", "p=37"]
    assert v.passed


def test_certificate_inconclusive_when_order_short():
    p = derive_params("3/10", "2/10")
    v = verify_prop2(p, 101, order=5)
    assert not v.passed and v.inconclusive and v.exit_code == 3


def test_certificate_rejects_small_Q():
    with pytest.raises(ParameterError):
        verify_prop2(derive_params("5/12", "1/12"), 100)


def test_first_negative_valuation():
    s = QExpansion([1, Fraction(1, 2), Fraction(1, 12)], 0, 2)
    assert first_negative_valuation(s, 3) == (2, -1)
    assert first_negative_valuation(s, 5) is None


def test_classify():
    assert classify(derive_params("5/12", "1/12")).kind == "congruence"
    c = classify(derive_params("3/10", "2/10"))
    assert (c.kind, c.component, c.progression) == ("unbounded", "f1", (10, 1))
    c = classify(derive_params("1/2", "1/3"))
    assert c.kind == "unbounded" and c.Q == 6
    assert classify(derive_params("2/10", "3/10")).component == "f2"


def test_bounded_check_examples():
    assert bounded_check(eta_power(8, 40)).clearing_constant == 1
    s = QExpansion([1, Fraction(1, 2)] + [Fraction(1, 4)] * 20, 0, 21)
    r = bounded_check(s)
    assert r.bounded and r.clearing_constant == 4


def test_bounded_check_growing():
    p = derive_params("3/10", "2/10")
    r = bounded_check(frobenius_solve(p, "m1", 200))
    assert not r.bounded and r.clearing_constant is None

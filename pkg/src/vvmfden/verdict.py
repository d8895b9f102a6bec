"""Structured pass/fail results of verification suites."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Literal

Status = Literal["pass", "fail", "inconclusive"]


@dataclass(frozen=True)
class Case:
    description: str
    expected: Any
    actual: Any
    status: Status

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {
            "description": self.description,
            "expected": self.expected,
            "actual": self.actual,
            "pass": self.passed,
            "status": self.status,
        }


@dataclass
class Verdict:
    suite: str
    cases: list[Case] = field(default_factory=list)

    def add(self, description: str, expected: Any, actual: Any, status: Status | None = None) -> Case:
        if status is None:
            status = "pass" if expected == actual else "fail"
        case = Case(description, expected, actual, status)
        self.cases.append(case)
        return case

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def inconclusive(self) -> bool:
        return not self.passed and all(c.status != "fail" for c in self.cases)

    @property
    def exit_code(self) -> int:
        if self.passed:
            return 0
        return 3 if self.inconclusive else 1

    def to_json(self) -> dict:
        return {"suite": self.suite, "pass": self.passed, "cases": [c.to_json() for c in self.cases]}

    @classmethod
    def from_json(cls, data: dict) -> Verdict:
        v = cls(data["suite"])
        for c in data["cases"]:
            v.cases.append(Case(c["description"], c["expected"], c["actual"], c["status"]))
        return v

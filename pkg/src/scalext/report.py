"""Uniform pass/fail records shared by every checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckResult:
    name: str
    passed: bool
    counterexample: Any = None
    detail: Any = None


@dataclass
class Report:
    check: str
    results: list[CheckResult] = field(default_factory=list)
    payload: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def add(self, name: str, passed: bool, counterexample=None, detail=None) -> bool:
        self.results.append(CheckResult(name, bool(passed), counterexample, detail))
        return bool(passed)

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def first_failure(self) -> CheckResult | None:
        fails = self.failures()
        return fails[0] if fails else None

    def __bool__(self):
        return self.passed

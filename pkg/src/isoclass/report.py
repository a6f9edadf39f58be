"""Named pass/fail checks shared by the verification suites and the CLI."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


def _plain(x: Any) -> Any:
    """JSON-friendly rendering of expected/actual values."""
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if hasattr(x, "item"):
        return x.item()
    return str(x)


@dataclass
class Check:
    name: str
    passed: bool
    expected: Any = None
    actual: Any = None
    scope: str | None = None

    @classmethod
    def equal(cls, name: str, expected, actual, scope: str | None = None) -> "Check":
        return cls(name, expected == actual, expected, actual, scope)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        return {"name": self.name, "scope": self.scope, "status": self.status,
                "expected": _plain(self.expected), "actual": _plain(self.actual)}


@dataclass
class CheckList:
    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def equal(self, name: str, expected, actual, scope: str | None = None) -> Check:
        return self.add(Check.equal(name, expected, actual, scope))

    def truth(self, name: str, ok: bool, scope: str | None = None) -> Check:
        return self.add(Check(name, bool(ok), True, bool(ok), scope))

    def extend(self, other: "CheckList"):
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

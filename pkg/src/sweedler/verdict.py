"""Pass/fail result carrying the first counterexample found."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Verdict:
    passed: bool
    check: str
    witness: dict[str, Any] | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    @classmethod
    def ok(cls, check: str, **details) -> "Verdict":
        return cls(True, check, None, details)

    @classmethod
    def fail(cls, check: str, **witness) -> "Verdict":
        return cls(False, check, witness)

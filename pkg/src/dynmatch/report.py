"""Audit results shared by the structure auditors."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List


@dataclass
class AuditReport:
    """Outcome of a structural audit: ok iff no failure was recorded."""

    failures: List[str] = field(default_factory=list)

    def fail(self, message: str) -> None:
        self.failures.append(message)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def first_violation(self) -> str:
        return self.failures[0] if self.failures else ""

    def __bool__(self) -> bool:
        return self.ok

"""Machine-readable verification reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List


@dataclass
class Report:
    check: str
    passed: bool
    witnesses: List[Dict[str, Any]] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)
    timing: float = 0.0

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check": self.check,
            "passed": self.passed,
            "witnesses": self.witnesses,
            "details": self.details,
            "warnings": self.warnings,
            "timing": round(self.timing, 6),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), default=str, **kw)

    def line(self) -> str:
        return f"{self.check}: {'PASS' if self.passed else 'FAIL'}"


def combine(check: str, reports: List[Report]) -> Report:
    out = Report(check, all(r.passed for r in reports))
    out.details["parts"] = [r.to_dict() for r in reports]
    out.timing = sum(r.timing for r in reports)
    for r in reports:
        out.warnings.extend(r.warnings)
    return out

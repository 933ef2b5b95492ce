"""Check records and reports shared by every verification routine."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any, Callable

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass
class CheckResult:
    check_id: str
    status: str
    witness: Any = None
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def as_dict(self, with_time: bool = False) -> dict:
        d = {"check_id": self.check_id, "status": self.status, "witness": self.witness}
        if with_time:
            d["elapsed"] = round(self.elapsed, 6)
        return d


@dataclass
class Report:
    title: str = ""
    checks: list[CheckResult] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def __bool__(self):
        return self.passed

    def __getitem__(self, check_id: str) -> CheckResult:
        for c in self.checks:
            if c.check_id == check_id:
                return c
        raise KeyError(check_id)

    def __contains__(self, check_id: str) -> bool:
        return any(c.check_id == check_id for c in self.checks)

    def add(self, check_id: str, passed: bool, witness: Any = None, elapsed: float = 0.0) -> CheckResult:
        res = CheckResult(check_id, PASS if passed else FAIL, None if passed else witness, elapsed)
        self.checks.append(res)
        return res

    def skip(self, check_id: str, reason: str | None = None) -> CheckResult:
        res = CheckResult(check_id, SKIPPED, reason)
        self.checks.append(res)
        return res

    def run(self, check_id: str, fn: Callable[[], Any]) -> CheckResult:
        """Time ``fn``; it returns None on success or a witness describing the failure."""
        start = time.perf_counter()
        witness = fn()
        return self.add(check_id, witness is None, witness, time.perf_counter() - start)

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(CheckResult(prefix + c.check_id, c.status, c.witness, c.elapsed))
        for key, value in other.data.items():
            self.data[prefix + key] = value

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status == FAIL]

    def to_json(self, with_time: bool = False) -> str:
        # elapsed times are left out by default so reports are byte-reproducible
        doc = {"title": self.title, "passed": self.passed,
               "checks": [c.as_dict(with_time) for c in self.checks]}
        if self.data:
            doc["data"] = self.data
        return json.dumps(doc, indent=2, sort_keys=False)

    def to_text(self) -> str:
        lines = [self.title] if self.title else []
        for c in self.checks:
            line = f"{c.status.upper():7} {c.check_id}"
            if c.witness is not None:
                line += f"  witness: {json.dumps(c.witness)}"
            lines.append(line)
        for key, value in self.data.items():
            lines.append(f"{key}: {json.dumps(value)}")
        lines.append("OK" if self.passed else "FAILED")
        return "\n".join(lines)

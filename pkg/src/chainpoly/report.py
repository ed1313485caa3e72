"""Pass/fail records produced by the verification routines."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .polyring import MultiPoly


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    lhs: object = None
    rhs: object = None
    skipped: bool = False

    @property
    def status(self) -> str:
        if self.skipped:
            return "skip"
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status}
        if self.detail:
            out["detail"] = self.detail
        if not self.passed:
            for side in ("lhs", "rhs"):
                v = getattr(self, side)
                if v is not None:
                    out[side] = v.to_text() if isinstance(v, MultiPoly) else str(v)
        return out


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)
    seconds: float = 0.0
    visits: int = 0
    _start: float = field(default_factory=time.perf_counter, repr=False)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "", lhs=None, rhs=None) -> Check:
        c = Check(name, bool(passed), detail, lhs, rhs)
        self.checks.append(c)
        return c

    def skip(self, name: str, reason: str) -> Check:
        c = Check(name, True, reason, skipped=True)
        self.checks.append(c)
        return c

    def equal(self, name: str, lhs, rhs, detail: str = "") -> Check:
        return self.add(name, lhs == rhs, detail, lhs, rhs)

    def extend(self, other: "Report") -> "Report":
        self.checks.extend(other.checks)
        self.visits += other.visits
        return self

    def finish(self) -> "Report":
        self.seconds = time.perf_counter() - self._start
        return self

    def to_json(self) -> dict:
        return {
            "status": "pass" if self.passed else "fail",
            "checks": [c.to_json() for c in self.checks],
            "seconds": round(self.seconds, 6),
            "visits": self.visits,
        }

    def lines(self) -> list[str]:
        return [f"{c.status.upper()} {c.name}"
                + (f"  ({c.detail})" if c.detail else "") for c in self.checks]

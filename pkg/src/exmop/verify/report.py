"""Per-check verification records and their JSON form."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

EXACT = "exact-pass"
NUMERIC = "numeric-pass"
FAIL = "fail"
STATUSES = (EXACT, NUMERIC, FAIL)
REPORT_SCHEMA = "exmop.report/1"


@dataclass(frozen=True)
class Check:
    name: str
    status: str
    residual: float | None = None
    witness: str | None = None
    detail: str | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "residual": self.residual,
            "witness": self.witness,
            "detail": self.detail,
        }

    @classmethod
    def from_dict(cls, d: dict) -> Check:
        return cls(d["name"], d["status"], d.get("residual"), d.get("witness"), d.get("detail"))


def exact(name: str, ok: bool, witness=None, detail: str | None = None) -> Check:
    """Exact check: pass or fail with a printable witness."""
    if ok:
        return Check(name, EXACT, detail=detail)
    return Check(name, FAIL, witness=None if witness is None else str(witness), detail=detail)


def numeric(name: str, residual: float, tol: float, detail: str | None = None) -> Check:
    """Numeric check ``residual < tol``."""
    residual = float(residual)
    status = NUMERIC if residual < tol else FAIL
    return Check(name, status, residual=residual, detail=detail if detail else f"tol={tol:g}")


@dataclass
class Report:
    example: int | None = None
    params: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, checks) -> None:
        for c in checks:
            self.add(c)

    @contextmanager
    def timed(self, label: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.timings[label] = round(time.perf_counter() - t0, 6)

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.sorted_checks() if not c.passed]

    def sorted_checks(self) -> list:
        return sorted(self.checks, key=lambda c: c.name)

    def to_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "example": self.example,
            "params": {k: str(v) for k, v in sorted(self.params.items())},
            "checks": [c.to_dict() for c in self.sorted_checks()],
            "timings": dict(sorted(self.timings.items())),
            "ok": self.ok,
        }

    @classmethod
    def from_dict(cls, d: dict) -> Report:
        if d.get("schema") != REPORT_SCHEMA:
            raise ValueError(f"not a report: schema {d.get('schema')!r}")
        return cls(d["example"], dict(d["params"]), [Check.from_dict(c) for c in d["checks"]], dict(d["timings"]))

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def loads(cls, s: str) -> Report:
        return cls.from_dict(json.loads(s))

    def summary_lines(self) -> list:
        out = []
        for c in self.sorted_checks():
            extra = f" residual={c.residual:.3e}" if c.residual is not None else ""
            out.append(f"{c.status:13s} {c.name}{extra}")
        return out


__all__ = ["Check", "EXACT", "FAIL", "NUMERIC", "Report", "exact", "numeric"]

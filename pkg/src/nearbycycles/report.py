"""Check reports: named expected/actual comparisons with provenance and timing."""
from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

from .errors import NearbyCyclesError, TooLarge


@dataclass(frozen=True)
class Outcome:
    expected: Any
    actual: Any
    passed: bool | None = None  # None: compare expected == actual

    def ok(self) -> bool:
        return self.expected == self.actual if self.passed is None else bool(self.passed)


@dataclass(frozen=True)
class Check:
    """A deferred comparison; ``run`` must be picklable for ``--jobs``."""

    name: str
    provenance: str
    run: Callable[[], Outcome]


@dataclass
class CheckResult:
    name: str
    expected: Any
    actual: Any
    provenance: str
    passed: bool
    millis: float

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "expected": _jsonable(self.expected),
            "actual": _jsonable(self.actual),
            "provenance": self.provenance,
            "pass": self.passed,
            "millis": round(self.millis, 3),
        }


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):  # numpy scalars
        return x.item()
    return x


def run_check(check: Check) -> CheckResult:
    t0 = time.perf_counter()
    try:
        out = check.run()
        expected, actual, passed = out.expected, out.actual, out.ok()
    except TooLarge:
        raise
    except (NearbyCyclesError, AssertionError) as exc:
        expected, actual, passed = "no error", f"{type(exc).__name__}: {exc}", False
    return CheckResult(check.name, expected, actual, check.provenance, passed, 1000 * (time.perf_counter() - t0))


def run_checks(checks: list[Check], jobs: int = 1) -> list[CheckResult]:
    """Run checks, in parallel when jobs > 1; result order follows input order."""
    if jobs <= 1 or len(checks) <= 1:
        return [run_check(c) for c in checks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_check, checks))


@dataclass
class CheckReport:
    command: str
    params: dict
    checks: list[CheckResult] = field(default_factory=list)
    # informational comparisons that never decide the overall verdict
    flags: list[CheckResult] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        out = {
            "command": self.command,
            "params": _jsonable(self.params),
            "checks": [c.as_dict() for c in self.checks],
            "pass": self.passed,
        }
        if self.flags:
            out["flags"] = [c.as_dict() for c in self.flags]
        if self.data:
            out["data"] = _jsonable(self.data)
        return out

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["command", "params", "kind", "name", "expected", "actual", "provenance", "pass", "millis"])
        params = json.dumps(_jsonable(self.params), sort_keys=True)
        for kind, rows in (("check", self.checks), ("flag", self.flags)):
            for c in rows:
                d = c.as_dict()
                w.writerow([
                    self.command, params, kind, d["name"],
                    json.dumps(d["expected"], sort_keys=True), json.dumps(d["actual"], sort_keys=True),
                    d["provenance"], d["pass"], d["millis"],
                ])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f"{self.command} {json.dumps(_jsonable(self.params), sort_keys=True)}"]
        for kind, rows in (("", self.checks), ("flag ", self.flags)):
            for c in rows:
                status = "PASS" if c.passed else ("NOTE" if kind else "FAIL")
                lines.append(f"  {status} {kind}{c.name}: expected {c.expected!r}, got {c.actual!r} [{c.provenance}] ({c.millis:.1f} ms)")
        for key, text in self.data.items():
            if isinstance(text, str) and "\n" in text:
                lines.append(text.rstrip("\n"))
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'} ({sum(c.passed for c in self.checks)}/{len(self.checks)})")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json() + "\n"
        if fmt == "csv":
            return self.to_csv()
        if fmt == "text":
            return self.to_text()
        raise ValueError(f"unknown format {fmt!r}")

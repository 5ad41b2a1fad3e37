"""Pass/fail reports with witnesses, shared by all axiom and identity checkers."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    passed: bool = True
    checked: int = 0
    witness: object = None
    note: str = ""

    def to_json(self) -> dict:
        out = {"status": "pass" if self.passed else "fail", "checked": self.checked}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Report:
    title: str
    checks: dict[str, Check] = field(default_factory=dict)
    data: dict = field(default_factory=dict)

    def check(self, name: str, note: str = "") -> Check:
        if name not in self.checks:
            self.checks[name] = Check(name, note=note)
        return self.checks[name]

    def record(self, name: str, ok: bool, witness=None) -> bool:
        """Count one evaluation of ``name``; keep the first failing witness."""
        c = self.check(name)
        c.checked += 1
        if not ok and c.passed:
            c.passed = False
            c.witness = witness
        return ok

    def fail(self, name: str, witness) -> None:
        self.record(name, False, witness)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def failed(self) -> list[str]:
        return [k for k, c in self.checks.items() if not c.passed]

    def to_json(self) -> dict:
        out = {
            "title": self.title,
            "verdict": "pass" if self.passed else "fail",
            "checks": {k: c.to_json() for k, c in self.checks.items()},
        }
        if self.data:
            out["data"] = self.data
        return out

    def merge(self, other: Report, prefix: str = "") -> None:
        for k, c in other.checks.items():
            self.checks[prefix + k] = c

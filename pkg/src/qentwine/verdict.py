"""Pass/fail verdicts with serialized counterexamples."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Counterexample:
    site: str
    lhs: str
    rhs: str
    note: str = ""

    def as_dict(self):
        d = {"site": self.site, "lhs": self.lhs, "rhs": self.rhs}
        if self.note:
            d["note"] = self.note
        return d

    def __str__(self):
        s = f"at {self.site}: {self.lhs}  !=  {self.rhs}"
        return f"{s} ({self.note})" if self.note else s


@dataclass
class CheckResult:
    ok: bool = True
    counterexamples: list = field(default_factory=list)

    def record(self, site, lhs, rhs, note=""):
        self.ok = False
        self.counterexamples.append(Counterexample(site, str(lhs), str(rhs), note))

    def merge(self, other):
        self.ok = self.ok and other.ok
        self.counterexamples.extend(other.counterexamples)
        return self

    def expect(self, condition, site, lhs, rhs, note=""):
        if not condition:
            self.record(site, lhs, rhs, note)
        return condition

    def __bool__(self):
        return self.ok

"""Check records shared by every battery."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .linalg import GRat, fmt


@dataclass
class Check:
    name: str
    passed: bool
    witness: Any = None
    skipped: bool = False
    note: str = ""

    def to_dict(self) -> Dict[str, Any]:
        d: Dict[str, Any] = {"name": self.name, "status": self.status}
        if self.witness is not None:
            d["witness"] = jsonable(self.witness)
        if self.note:
            d["note"] = self.note
        return d

    @property
    def status(self) -> str:
        if self.skipped:
            return "skipped"
        return "pass" if self.passed else "fail"


@dataclass
class Report:
    title: str
    checks: List[Check] = field(default_factory=list)

    def add(self, name: str, passed: bool, witness: Any = None, note: str = "") -> Check:
        c = Check(name, bool(passed), None if passed else witness, note=note)
        self.checks.append(c)
        return c

    def skip(self, name: str, note: str) -> Check:
        c = Check(name, True, skipped=True, note=note)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = "") -> "Report":
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.witness, c.skipped, c.note))
        return self

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def get(self, name: str) -> Optional[Check]:
        for c in self.checks:
            if c.name == name:
                return c
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {"title": self.title, "ok": self.ok, "checks": [c.to_dict() for c in self.checks]}

    def to_text(self) -> str:
        lines = [f"{self.title}: {'PASS' if self.ok else 'FAIL'}"]
        for c in self.checks:
            line = f"  [{c.status}] {c.name}"
            if c.note:
                line += f" ({c.note})"
            if c.witness is not None:
                line += f" witness={json.dumps(jsonable(c.witness), sort_keys=True)}"
            lines.append(line)
        return "\n".join(lines)

    def __str__(self):
        return self.to_text()


def jsonable(x: Any) -> Any:
    """Exact, deterministic JSON view of witnesses."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    if isinstance(x, GRat) or type(x).__name__ == "mpq":
        return fmt(x)
    return str(x)

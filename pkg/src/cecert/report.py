"""Deterministic check reports.

Verifiers return a CheckReport: an ordered list of named pass/fail
items with short detail strings.  Reports serialize to JSON with a
stable key order and no volatile fields (no timestamps, no timings), so
two runs over the same input produce byte-identical output.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field


@dataclass
class CheckItem:
    name: str
    ok: bool
    detail: str = ""

    def to_dict(self) -> dict:
        d = {"name": self.name, "ok": self.ok}
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class CheckReport:
    items: list[CheckItem] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.items.append(CheckItem(name, bool(ok), detail))

    def extend(self, other: CheckReport, prefix: str = "") -> None:
        for item in other.items:
            self.items.append(
                CheckItem(prefix + item.name if prefix else item.name, item.ok, item.detail)
            )

    @property
    def ok(self) -> bool:
        return all(item.ok for item in self.items)

    def failures(self) -> list[CheckItem]:
        return [item for item in self.items if not item.ok]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": [item.to_dict() for item in self.items]}


def report_to_json(payload: dict) -> str:
    """Canonical JSON: fixed indentation, insertion order, newline at end."""
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


def digest_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()

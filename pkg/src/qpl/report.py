"""Verification reports and errata records shared by all checkers."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from qpl.qcore import Series

PASS = "PASS"
FAIL = "FAIL"


@dataclass
class Resolution:
    """An empirically settled sign/exponent/reading where the printed form fails.

    ``candidates`` maps every tested variant to ``"PASS"`` or a short failure
    description; ``chosen`` is the unique passing variant (None if there is
    not exactly one).
    """

    item: str
    printed: str
    chosen: str | None
    candidates: dict[str, str]
    note: str = ""

    @property
    def printed_ok(self) -> bool:
        return self.candidates.get(self.printed) == PASS

    def to_dict(self) -> dict[str, Any]:
        return {
            "item": self.item,
            "printed": self.printed,
            "chosen": self.chosen,
            "printed_holds": self.printed_ok,
            "candidates": dict(self.candidates),
            "note": self.note,
        }


@dataclass
class Report:
    schema: str
    range: tuple[int, int] | None
    status: str
    resolution: Resolution | None = None
    first_failure: dict[str, Any] | None = None
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict[str, Any]:
        out = {
            "schema": self.schema,
            "range": list(self.range) if self.range is not None else None,
            "status": self.status,
            "resolution": self.resolution.to_dict() if self.resolution else None,
            "first_failure": self.first_failure,
        }
        out.update(self.details)
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def summary(self) -> str:
        rng = "" if self.range is None else f" N in [{self.range[0]}, {self.range[1]}]"
        line = f"{self.status}  {self.schema}{rng}"
        if self.first_failure:
            line += f"  first failure: {self.first_failure}"
        return line


def leading_term(s: Series) -> dict[str, Any] | None:
    """Lowest-order nonzero term of a residual, for failure reports."""
    for d, e, c in s.terms():
        return {"q": d, "x": e, "c": str(c)}
    return None


def status_of(ok: bool) -> str:
    return PASS if ok else FAIL

"""Outcome of comparing two series (or checking one identity) to an order."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

from .coeffring import ParamPoly


def clip(x, width: int = 160) -> str:
    s = str(x)
    return s if len(s) <= width else s[: width - 3] + "..."


@dataclass
class IdentityReport:
    id: str
    order: Fraction
    status: str  # "pass" | "fail" | "error"
    first_mismatch: Optional[Tuple[Fraction, ParamPoly, ParamPoly]] = None
    elapsed: float = 0.0
    notes: str = ""
    anchor: str = ""
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def __bool__(self):
        return self.passed

    def summary(self) -> str:
        line = f"{self.id}: {self.status} (order {self.order}, {self.elapsed:.2f}s)"
        if self.first_mismatch is not None:
            e, lhs, rhs = self.first_mismatch
            line += f" first mismatch at q^{e}: {clip(lhs)} != {clip(rhs)}"
        if self.status == "error" and self.notes:
            line += f" [{self.notes}]"
        return line

    def to_dict(self) -> dict:
        d = {
            "id": self.id,
            "order": str(self.order),
            "status": self.status,
            "elapsed": round(self.elapsed, 4),
            "notes": self.notes,
            "anchor": self.anchor,
            "checks": list(self.checks),
        }
        if self.first_mismatch is not None:
            e, lhs, rhs = self.first_mismatch
            d["first_mismatch"] = {"exp": str(e), "lhs": str(lhs), "rhs": str(rhs)}
        return d

"""Verification outcomes and the Sato-Tate histogram type."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

__all__ = ["LawReport", "Histogram", "semicircle_cdf"]


@dataclass
class LawReport:
    """Outcome of one verification run.

    ``violations`` holds ``(key, expected, got)`` triples; ``key`` is normally
    the offending prime or index, or a short label for aggregate checks such as
    a discrepancy exceeding its tolerance.  A report passes exactly when it has
    no violations.
    """

    law_id: str
    prime_range: tuple[int, int]
    checked: int = 0
    violations: list[tuple[Any, Any, Any]] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def fail(self, key, expected, got) -> None:
        self.violations.append((key, expected, got))

    def to_dict(self) -> dict[str, Any]:
        return {
            "law_id": self.law_id,
            "prime_range": list(self.prime_range),
            "checked": self.checked,
            "passed": self.passed,
            "violations": [list(v) for v in self.violations],
            "summary": self.summary,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=_jsonable)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> LawReport:
        report = cls(
            law_id=data["law_id"],
            prime_range=tuple(data["prime_range"]),
            checked=data["checked"],
            violations=[tuple(v) for v in data["violations"]],
            summary=data.get("summary", {}),
        )
        if report.passed != data.get("passed", report.passed):
            raise ValueError("inconsistent 'passed' flag in serialized report")
        return report

    @classmethod
    def from_json(cls, text: str) -> LawReport:
        return cls.from_dict(json.loads(text))

    def to_table(self, max_violations: int = 20) -> str:
        lo, hi = self.prime_range
        lines = [
            f"law        {self.law_id}",
            f"range      {lo}..{hi}",
            f"checked    {self.checked}",
            f"status     {'PASS' if self.passed else 'FAIL'}",
        ]
        for key in sorted(self.summary):
            lines.append(f"{key:<10} {_short(self.summary[key])}")
        if self.violations:
            lines.append(f"violations ({len(self.violations)})")
            lines.append("  key        expected        got")
            for key, exp, got in self.violations[:max_violations]:
                lines.append(f"  {key!s:<10} {exp!s:<15} {got!s}")
            if len(self.violations) > max_violations:
                lines.append(f"  ... {len(self.violations) - max_violations} more")
        return "\n".join(lines)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["law_id", "key", "expected", "got"])
        for key, exp, got in self.violations:
            w.writerow([self.law_id, key, exp, got])
        return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, (set, frozenset, tuple)):
        return sorted(obj) if isinstance(obj, (set, frozenset)) else list(obj)
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _short(value, limit: int = 80) -> str:
    text = json.dumps(value, default=_jsonable) if not isinstance(value, str) else value
    return text if len(text) <= limit else text[: limit - 3] + "..."


def semicircle_cdf(x: float) -> float:
    """Distribution function of (2/pi) sqrt(1 - t^2) dt on [-1, 1]."""
    x = min(1.0, max(-1.0, x))
    return 0.5 + (x * math.sqrt(1.0 - x * x) + math.asin(x)) / math.pi


@dataclass(frozen=True)
class Histogram:
    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]
    total: int

    def __post_init__(self):
        if len(self.bin_edges) != len(self.counts) + 1:
            raise ValueError("need one more edge than bins")
        if any(b <= a for a, b in zip(self.bin_edges, self.bin_edges[1:])):
            raise ValueError("bin edges must be strictly ascending")
        if sum(self.counts) != self.total:
            raise ValueError("counts do not sum to total")

    @classmethod
    def uniform(cls, values, bins: int = 40) -> Histogram:
        if bins < 2:
            raise ValueError("need at least two bins")
        edges = tuple(-1.0 + 2.0 * i / bins for i in range(bins + 1))
        counts = [0] * bins
        for t in values:
            counts[min(bins - 1, max(0, int((t + 1.0) * bins / 2.0)))] += 1
        return cls(edges, tuple(counts), sum(counts))

    def expected(self) -> list[float]:
        """Semicircle-law expected count per bin."""
        return [
            self.total * (semicircle_cdf(b) - semicircle_cdf(a))
            for a, b in zip(self.bin_edges, self.bin_edges[1:])
        ]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bin_lo", "bin_hi", "count", "expected"])
        for (a, b), n, e in zip(
            zip(self.bin_edges, self.bin_edges[1:]), self.counts, self.expected()
        ):
            w.writerow([repr(a), repr(b), n, f"{e:.6f}"])
        return buf.getvalue()

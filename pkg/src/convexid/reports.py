"""Tabular results shared by the identification suites."""
from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List

COLUMNS = ("sample_id", "params", "lhs", "rhs", "margin", "verdict")


def flatten_params(params: Dict) -> str:
    """``key=value`` pairs joined by ``;`` with ``repr`` floats (exact round-trip)."""
    parts = []
    for key, val in params.items():
        if hasattr(val, "tolist"):
            val = val.tolist()
        parts.append(f"{key}={val!r}")
    return ";".join(parts)


@dataclass
class SuiteRow:
    sample_id: int
    params: str
    lhs: float
    rhs: float
    margin: float
    verdict: str


@dataclass
class SuiteReport:
    """Rows of ``lhs`` vs ``rhs`` comparisons plus an overall verdict."""

    name: str
    rows: List[SuiteRow] = field(default_factory=list)
    verdict: str = "CONSISTENT"
    notes: Dict = field(default_factory=dict)

    def add(self, sample_id, params, lhs, rhs, verdict, margin=None):
        lhs, rhs = float(lhs), float(rhs)
        m = rhs - lhs if margin is None else float(margin)
        p = params if isinstance(params, str) else flatten_params(params)
        self.rows.append(SuiteRow(int(sample_id), p, lhs, rhs, m, verdict))

    def counts(self) -> Counter:
        return Counter(r.verdict for r in self.rows)

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in self.rows:
            w.writerow([r.sample_id, r.params, repr(r.lhs), repr(r.rhs), repr(r.margin), r.verdict])
        return buf.getvalue()

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.csv_text())

    def summary(self) -> str:
        c = self.counts()
        parts = ", ".join(f"{k}={c[k]}" for k in sorted(c))
        return f"{self.name}: {self.verdict} ({parts})"

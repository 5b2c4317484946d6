"""Self-checking audit reports with a stable, golden-testable layout.

A report is a header, a list of named sections, optional numeric series,
and a trailing self-check section.  Every witness recorded along the way
carries a revalidation thunk; finalize() reruns all of them and refuses
to produce output if any fails.  Rendering is deterministic: insertion
order everywhere, no timestamps, no machine-dependent content.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

VERDICTS = ("verified-at-scale", "refuted", "inconclusive")

# exit codes for the three verdicts, used by the CLI
EXIT_CODES = {"verified-at-scale": 0, "refuted": 2, "inconclusive": 3}


class SelfCheckError(RuntimeError):
    """A recorded witness failed revalidation; the report must not ship."""


class BudgetExceeded(RuntimeError):
    """Raised by Budget.charge once the word allowance runs out."""


class Budget:
    """Counts words touched by an audit and enforces a ceiling.

    Audits charge one unit per word they enumerate, trace, or test.  The
    count doubles as the deterministic nodes-touched figure in reports.
    """

    def __init__(self, limit: int = 5_000_000):
        self.limit = limit
        self.used = 0

    def charge(self, amount: int = 1) -> None:
        self.used += amount
        if self.used > self.limit:
            raise BudgetExceeded(f"budget of {self.limit} words exhausted")


@dataclass
class Series:
    """A numeric table; rendered as a section and plottable to a file."""

    name: str
    x_label: str
    y_label: str
    rows: list[tuple[float, float]] = field(default_factory=list)

    def add(self, x: float, y: float) -> None:
        self.rows.append((x, y))


def _fmt_num(v: float) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float) and v.is_integer():
        return str(int(v))
    return str(v)


class Section:
    def __init__(self, name: str):
        self.name = name
        self.fields: list[tuple[str, str]] = []

    def field(self, key: str, value: object) -> None:
        self.fields.append((key, _fmt_num(value) if isinstance(value, (bool, int, float)) else str(value)))


class AuditReport:
    def __init__(self, audit: str, scenario: str, rank: int):
        self.audit = audit
        self._header: list[tuple[str, str]] = [
            ("audit", audit),
            ("scenario", scenario),
            ("rank", str(rank)),
        ]
        self._sections: list[Section] = []
        self._series: list[Series] = []
        self._checks: list[tuple[str, Callable[[], bool]]] = []
        self._verdict: str | None = None
        self._reason: str | None = None
        self._finalized = False

    # -- building ------------------------------------------------------------

    def _require_open(self) -> None:
        if self._finalized:
            raise RuntimeError("report already finalized")

    def header(self, key: str, value: object) -> None:
        self._require_open()
        self._header.append((key, _fmt_num(value) if isinstance(value, (bool, int, float)) else str(value)))

    def section(self, name: str) -> Section:
        self._require_open()
        s = Section(name)
        self._sections.append(s)
        return s

    def series(self, name: str, x_label: str, y_label: str) -> Series:
        self._require_open()
        s = Series(name, x_label, y_label)
        self._series.append(s)
        return s

    def check(self, description: str, thunk: Callable[[], bool]) -> None:
        """Register a witness revalidation to run at finalize time."""
        self._require_open()
        self._checks.append((description, thunk))

    def verdict(self, verdict: str, reason: str | None = None) -> None:
        self._require_open()
        if verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {verdict!r}")
        self._verdict = verdict
        self._reason = reason

    @property
    def verdict_value(self) -> str:
        if self._verdict is None:
            raise RuntimeError("verdict not set")
        return self._verdict

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict_value]

    # -- sealing -------------------------------------------------------------

    def finalize(self, nodes_touched: int | None = None) -> "AuditReport":
        """Rerun every recorded witness check, then freeze the report."""
        if self._verdict is None:
            raise RuntimeError("cannot finalize a report without a verdict")
        for description, thunk in self._checks:
            ok = False
            try:
                ok = bool(thunk())
            except Exception as exc:  # a crashing check is a failing check
                raise SelfCheckError(f"self-check crashed: {description}: {exc}") from exc
            if not ok:
                raise SelfCheckError(f"self-check failed: {description}")
        if nodes_touched is not None:
            self._header.append(("nodes-touched", str(nodes_touched)))
        self._header.append(("verdict", self._verdict))
        if self._reason is not None:
            self._header.append(("reason", self._reason))
        sc = Section("self-check")
        sc.field("checks", len(self._checks))
        sc.field("status", "all witnesses revalidated" if self._checks else "no witnesses recorded")
        self._sections.append(sc)
        self._finalized = True
        return self

    # -- rendering -----------------------------------------------------------

    def _require_final(self) -> None:
        if not self._finalized:
            raise RuntimeError("report not finalized")

    def to_text(self) -> str:
        self._require_final()
        lines = [f"{k}: {v}" for k, v in self._header]
        for s in self._sections:
            lines.append("")
            lines.append(f"[{s.name}]")
            lines.extend(f"{k}: {v}" for k, v in s.fields)
        for t in self._series:
            lines.append("")
            lines.append(f"[series {t.name}]")
            lines.append(f"x-label: {t.x_label}")
            lines.append(f"y-label: {t.y_label}")
            lines.extend(f"{_fmt_num(x)}: {_fmt_num(y)}" for x, y in t.rows)
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        self._require_final()
        data = {
            "header": {k: v for k, v in self._header},
            "sections": [
                {"name": s.name, "fields": [[k, v] for k, v in s.fields]}
                for s in self._sections
            ],
            "series": [
                {
                    "name": t.name,
                    "x-label": t.x_label,
                    "y-label": t.y_label,
                    "rows": [[x, y] for x, y in t.rows],
                }
                for t in self._series
            ],
        }
        return json.dumps(data, indent=2, sort_keys=False) + "\n"

    @property
    def all_series(self) -> list[Series]:
        return list(self._series)

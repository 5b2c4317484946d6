"""Render report series to PNG files.

Figures are opt-in on the report path: each tabular series in an
AuditReport becomes one line plot saved next to the delimited output.
matplotlib is imported lazily so the library and the text-only report
path never pay for it.
"""
from __future__ import annotations

import os
import re

from .report import AuditReport

__all__ = ["render_figures"]


def _slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "-", name).strip("-") or "series"


def render_figures(report: AuditReport, directory: str, stem: str) -> list[str]:
    """Write one PNG per series to directory, named <stem>_<series>.png.

    Returns the list of written paths, in report order.  Series with
    non-numeric y values (witness columns) are skipped.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(directory, exist_ok=True)
    written: list[str] = []
    for series in report.all_series:
        rows = [
            (x, y)
            for x, y in series.rows
            if isinstance(x, (int, float)) and isinstance(y, (int, float))
        ]
        if not rows:
            continue
        fig, ax = plt.subplots(figsize=(5.0, 3.4))
        ax.plot([r[0] for r in rows], [r[1] for r in rows], marker="o", lw=1.2)
        ax.set_xlabel(series.x_label)
        ax.set_ylabel(series.y_label)
        ax.set_title(f"{report.audit}: {series.name}")
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        path = os.path.join(directory, f"{stem}_{_slug(series.name)}.png")
        fig.savefig(path, dpi=110)
        plt.close(fig)
        written.append(path)
    return written

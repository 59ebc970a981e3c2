"""CSV emission for sweeps and reproduction reports.

Numbers use 6 significant digits and never depend on the locale.
"""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import Iterable, Sequence

from ..calibration import EuSweep, SweepCurve
from .report import RunReport

PROB_HEADER = ("theta", "probability")
REPORT_HEADER = ("experiment", "quantity", "paper_value", "computed", "delta", "tolerance", "pass")
DOMINANCE_HEADER = ("context", "theta_start", "theta_end")


def fmt(value: float | str) -> str:
    if isinstance(value, str):
        return value
    if math.isnan(value):
        return ""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".6g")


def eu_header(actions: Sequence[str]) -> tuple[str, ...]:
    return ("theta", "context", *(f"eu_action_{a}" for a in actions))


def _render(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def probability_csv(curve: SweepCurve) -> str:
    return _render(PROB_HEADER, ((fmt(float(t)), fmt(float(v))) for t, v in zip(curve.thetas, curve.values)))


def eu_csv(sweep: EuSweep, actions: Sequence[str]) -> str:
    contexts = list(dict.fromkeys(z for z, _ in sweep.curves))
    rows = []
    if sweep.curves:
        thetas = next(iter(sweep.curves.values())).thetas
        for i, theta in enumerate(thetas):
            for z in contexts:
                rows.append(
                    (fmt(float(theta)), z, *(fmt(float(sweep.curves[(z, a)].values[i])) for a in actions))
                )
    return _render(eu_header(actions), rows)


def dominance_csv(sweep: EuSweep) -> str:
    rows = [(z, fmt(lo), fmt(hi)) for z, spans in sweep.dominance.items() for lo, hi in spans]
    return _render(DOMINANCE_HEADER, rows)


def report_csv(report: RunReport) -> str:
    rows = (
        (
            c.experiment,
            c.quantity,
            fmt(c.paper_value),
            fmt(c.computed),
            fmt(c.delta),
            fmt(c.tolerance),
            "true" if c.passed else "false",
        )
        for c in report.comparisons
    )
    return _render(REPORT_HEADER, rows)


def write_text(text: str, path: str | Path) -> Path:
    path = Path(path)
    try:
        path.write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    return path


def emit_csv(data: SweepCurve | EuSweep | RunReport, path: str | Path, actions: Sequence[str] = ()) -> list[Path]:
    """Write ``data`` as CSV; EU sweeps also get a ``<stem>.dominance.csv`` sidecar."""
    path = Path(path)
    if isinstance(data, SweepCurve):
        return [write_text(probability_csv(data), path)]
    if isinstance(data, EuSweep):
        if not actions:
            actions = list(dict.fromkeys(a for _, a in data.curves))
        sidecar = path.with_name(path.stem + ".dominance.csv")
        return [write_text(eu_csv(data, actions), path), write_text(dominance_csv(data), sidecar)]
    if isinstance(data, RunReport):
        return [write_text(report_csv(data), path)]
    raise TypeError(f"cannot emit {type(data).__name__} as CSV")

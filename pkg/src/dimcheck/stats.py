"""Effect-size "close to the best" winner marking and median/IQR summaries."""
from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass
from pathlib import Path

import numpy as np

# halfway between Cohen's "small" (0.2) and "medium" (0.5) effects
COHEN_D = 0.35
# absorbs rounding so a cell exactly one threshold from the best still wins
_BOUNDARY_EPS = 1e-12

METRICS = ("recall", "false_alarm", "auc")
DIRECTION = {"recall": "maximize", "false_alarm": "minimize", "auc": "maximize"}


class StatsError(ValueError):
    pass


@dataclass(frozen=True)
class ResultTable:
    """Dataset x learner grid of one metric. Cells may be None (undefined)."""

    metric: str
    rows: tuple[str, ...]
    columns: tuple[str, ...]
    cells: tuple[tuple[float | None, ...], ...]

    def __post_init__(self):
        if len(self.cells) != len(self.rows) or any(len(r) != len(self.columns) for r in self.cells):
            raise StatsError("cell grid does not match row/column labels")
        for row in self.cells:
            for v in row:
                if v is not None and not (np.isfinite(v) and 0.0 <= v <= 1.0):
                    raise StatsError(f"cell value {v!r} outside [0, 1]")

    @classmethod
    def from_array(cls, metric, rows, columns, values) -> "ResultTable":
        return cls(metric, tuple(rows), tuple(columns),
                   tuple(tuple(None if v is None else float(v) for v in r) for r in values))

    def values(self) -> list[float]:
        return [v for row in self.cells for v in row if v is not None]


@dataclass(frozen=True)
class WinnerMarking:
    threshold: float
    direction: str
    winners: tuple[tuple[bool, ...], ...]


def cohens_threshold(values, d: float = COHEN_D) -> float:
    """``d`` times the sample standard deviation of the pooled values."""
    v = [float(x) for x in values if x is not None]
    if len(v) < 2:
        raise StatsError("need at least 2 values for a standard deviation")
    # statistics.stdev is exact for constant input, np.std is not
    return d * statistics.stdev(v)


def mark_winners(table: ResultTable, threshold: float, direction: str = "maximize") -> WinnerMarking:
    if not table.rows or not table.columns:
        raise StatsError("empty table")
    if threshold < 0:
        raise StatsError("threshold must be non-negative")
    if direction not in ("maximize", "minimize"):
        raise StatsError(f"unknown direction {direction!r}")
    flags = []
    for row in table.cells:
        defined = [v for v in row if v is not None]
        if not defined:
            flags.append(tuple(False for _ in row))
            continue
        if direction == "maximize":
            best = max(defined)
            flags.append(tuple(v is not None and v >= best - threshold - _BOUNDARY_EPS for v in row))
        else:
            best = min(defined)
            flags.append(tuple(v is not None and v <= best + threshold + _BOUNDARY_EPS for v in row))
    return WinnerMarking(threshold, direction, tuple(flags))


def median_iqr(values) -> tuple[float, float]:
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size == 0:
        raise StatsError("median_iqr of an empty sequence")
    q1, med, q3 = np.percentile(v, [25, 50, 75], method="linear")
    return float(med), float(q3 - q1)


def _fmt(v: float | None) -> str:
    return "" if v is None else repr(float(v))


def write_table_csv(table: ResultTable, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["dataset", *table.columns])
        for name, row in zip(table.rows, table.cells):
            w.writerow([name, *(_fmt(v) for v in row)])


def write_winners_csv(table: ResultTable, marking: WinnerMarking, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["dataset", *table.columns])
        for name, flags in zip(table.rows, marking.winners):
            w.writerow([name, *(int(f) for f in flags)])


def read_table_csv(path, metric: str) -> ResultTable:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    return ResultTable.from_array(
        metric, [r[0] for r in body], header[1:],
        [[None if c == "" else float(c) for c in r[1:]] for r in body])


def render_text(table: ResultTable, marking: WinnerMarking, percent: bool = True) -> str:
    """Fixed-width rendering with winning cells in [brackets]."""
    def cell(v, win):
        if v is None:
            s = "n/a"
        else:
            s = f"{100 * v:.1f}" if percent else f"{v:.3f}"
        return f"[{s}]" if win else f" {s} "

    first = max([len("dataset"), *(len(r) for r in table.rows)])
    widths = [max(len(c), 8) for c in table.columns]
    unit = f"{100 * marking.threshold:.1f}%" if percent else f"{marking.threshold:.4f}"
    lines = [f"{table.metric} ({marking.direction}, threshold {unit})",
             "  ".join(["dataset".ljust(first), *(c.rjust(w) for c, w in zip(table.columns, widths))])]
    for name, row, flags in zip(table.rows, table.cells, marking.winners):
        lines.append("  ".join([name.ljust(first),
                                *(cell(v, f).rjust(w) for v, f, w in zip(row, flags, widths))]))
    return "\n".join(lines) + "\n"

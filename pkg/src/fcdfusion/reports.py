"""CSV report schemas and writers.

All reports are UTF-8 with Unix newlines. Real values are written with 6
significant digits; infinities are written as the literal ``inf``. Metric
values that could not be computed stay as empty cells. The schemas below are
stable interfaces for downstream tooling; changing them is a breaking change.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .metrics import METRIC_NAMES

__all__ = [
    "EVAL_HEADER",
    "MEANS_HEADER",
    "BENCH_HEADER",
    "ABLATION_HEADER",
    "format_real",
    "write_csv",
    "write_eval_report",
    "write_means_report",
    "means_path_for",
]

EVAL_HEADER = ("pair_id", "method") + METRIC_NAMES + ("flops_total",)
MEANS_HEADER = ("method",) + METRIC_NAMES + ("flops_total",)
BENCH_HEADER = ("method", "model_flops", "audit_flops", "ns_per_pixel", "mpixels_per_s")
ABLATION_HEADER = ("pair_id", "setting", "CD", "EN", "SD")


def format_real(x: float) -> str:
    """6 significant digits; ``inf`` spelled literally."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.6g}"


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[str]]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _metric_cells(values: Mapping[str, float]) -> list[str]:
    return [format_real(values[name]) if name in values else "" for name in METRIC_NAMES]


def write_eval_report(
    path: Path,
    rows: Iterable[tuple[str, str, Mapping[str, float], int]],
) -> None:
    """Write per-pair rows of (pair_id, method, metric values, model FLOPs)."""
    out = []
    for pair_id, method, values, flops in rows:
        out.append([pair_id, method] + _metric_cells(values) + [str(flops)])
    write_csv(path, EVAL_HEADER, out)


def write_means_report(
    path: Path,
    per_method: Mapping[str, Sequence[tuple[Mapping[str, float], int]]],
) -> None:
    """Write dataset means per method.

    Means skip absent entries and non-finite values (an ``inf`` PSNR does not
    poison the dataset mean); a metric absent everywhere stays empty.
    """
    out = []
    for method, rows in per_method.items():
        cells = [method]
        for name in METRIC_NAMES:
            samples = [v[name] for v, _ in rows if name in v and math.isfinite(v[name])]
            cells.append(format_real(sum(samples) / len(samples)) if samples else "")
        flops = [f for _, f in rows]
        cells.append(format_real(sum(flops) / len(flops)) if flops else "")
        out.append(cells)
    write_csv(path, MEANS_HEADER, out)


def means_path_for(report_path: Path) -> Path:
    """Sibling path for the per-method means file of an evaluation report."""
    report_path = Path(report_path)
    return report_path.with_name(report_path.stem + "_means" + (report_path.suffix or ".csv"))

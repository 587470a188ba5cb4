"""Reports over fitted models and record sets: cluster summaries with
rounded percentages, top-sender rankings, and text/CSV/SVG rendering."""

import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

from .core import MISSING, UnsupportedFormat
from .tabular import DuplicateProfile, format_csv_row

UNKNOWN_SENDER = "(unknown)"

FORMATS = ("text", "csv", "svg-bars")


@dataclass(frozen=True)
class ClusterSummary:
    sizes: tuple
    percentages: tuple  # integer percent per cluster
    iterations: int
    chosen_k: int
    attributes: tuple


@dataclass(frozen=True)
class SenderEntry:
    address: str
    count: int
    share: float


@dataclass(frozen=True)
class SenderReport:
    entries: tuple
    total: int


def _round_half_away(x):
    # nearest integer, ties away from zero (x is never negative here)
    return math.floor(x + 0.5)


def summarize(model, ds):
    total = len(ds.rows)
    percentages = tuple(_round_half_away(size * 100 / total) for size in model.sizes)
    return ClusterSummary(
        tuple(model.sizes),
        percentages,
        model.iterations,
        model.chosen_k,
        tuple(spec.name for spec in ds.schema),
    )


def top_senders(records, n):
    """Rank sender addresses by message count (ties by address).

    Records without a From address are pooled under "(unknown)" so the
    counts always add up to the corpus size.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    counts = Counter(
        rec.from_addr if rec.from_addr is not MISSING else UNKNOWN_SENDER
        for rec in records
    )
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    total = len(records)
    entries = tuple(
        SenderEntry(addr, count, count / total) for addr, count in ranked[:n]
    )
    return SenderReport(entries, total)


# ---------------------------------------------------------------------------
# Rendering


def _bar_entries(report):
    if isinstance(report, ClusterSummary):
        return [(str(i), s) for i, s in enumerate(report.sizes)]
    if isinstance(report, DuplicateProfile):
        return [("different", report.n_different), ("identical", report.n_identical)]
    if isinstance(report, SenderReport):
        return [(e.address, e.count) for e in report.entries]
    raise TypeError(f"cannot render {type(report).__name__}")


def _text_lines(report):
    if isinstance(report, ClusterSummary):
        lines = [f"k={report.chosen_k}", f"Iterations: {report.iterations}"]
        for i, (size, pct) in enumerate(zip(report.sizes, report.percentages)):
            lines.append(f"{i}  {size} ({pct:3d}%)")
        return lines
    if isinstance(report, DuplicateProfile):
        return [
            "projection: " + ",".join(report.projection),
            f"different: {report.n_different}, identical: {report.n_identical}",
        ]
    if isinstance(report, SenderReport):
        lines = ["sender count share"]
        for e in report.entries:
            lines.append(f"{e.address} {e.count} {e.share:.4f}")
        return lines
    raise TypeError(f"cannot render {type(report).__name__}")


def _csv_lines(report):
    if isinstance(report, ClusterSummary):
        lines = [format_csv_row(["cluster", "size", "percent"])]
        for i, (size, pct) in enumerate(zip(report.sizes, report.percentages)):
            lines.append(format_csv_row([i, size, pct]))
        return lines
    if isinstance(report, DuplicateProfile):
        return [
            format_csv_row(["projection", "different", "identical"]),
            format_csv_row([";".join(report.projection), report.n_different, report.n_identical]),
        ]
    if isinstance(report, SenderReport):
        lines = [format_csv_row(["sender", "count", "share"])]
        for e in report.entries:
            lines.append(format_csv_row([e.address, e.count, f"{e.share:.6f}"]))
        return lines
    raise TypeError(f"cannot render {type(report).__name__}")


def _svg_bars(entries):
    """Standalone SVG 1.1 bar chart, exactly one rect per entry."""
    width, bar_h, gap, label_w, top = 640, 18, 8, 220, 16
    height = top + len(entries) * (bar_h + gap) + gap
    max_count = max((c for _, c in entries), default=0)
    span = width - label_w - 60
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}">',
    ]
    y = top
    for label, count in entries:
        bar = 0.0 if max_count == 0 else span * count / max_count
        out.append(
            f'<text x="4" y="{y + 13}" font-size="12">{escape(str(label))}</text>'
        )
        out.append(
            f'<rect x="{label_w}" y="{y}" width="{bar:.2f}" height="{bar_h}" '
            f'fill="#4477aa"/>'
        )
        out.append(
            f'<text x="{label_w + bar + 4:.2f}" y="{y + 13}" font-size="12">{count}</text>'
        )
        y += bar_h + gap
    out.append("</svg>")
    return out


def render_report(report, fmt, sink):
    """Render a summary/profile/report as text, CSV or an SVG bar chart."""
    if fmt == "text":
        lines = _text_lines(report)
    elif fmt == "csv":
        lines = _csv_lines(report)
    elif fmt == "svg-bars":
        lines = _svg_bars(_bar_entries(report))
    else:
        raise UnsupportedFormat(f"unknown report format {fmt!r}")
    payload = "\n".join(lines) + "\n"
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8", newline="") as f:
            f.write(payload)
    else:
        sink.write(payload)

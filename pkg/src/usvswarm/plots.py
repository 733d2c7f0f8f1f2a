"""Minimal standalone SVG line plots. No external assets, no timestamps."""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Optional, Sequence
from xml.sax.saxutils import escape

from .metrics import METRIC_COLUMNS

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f")

# metrics.csv column -> (file stem, y-axis label)
METRIC_PLOTS = {
    "avg_speed": ("avg_speed", "mean USV speed"),
    "avg_min_dist": ("avg_min_dist", "mean distance to nearest USV"),
    "omega": ("omega", "inertia weight"),
    "exploration": ("exploration", "mean distance to swarm centroid (proxy)"),
    "exploitation": ("exploitation", "mean distance to own best (proxy)"),
}

W, H = 640, 400
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 40, 50


class MalformedCsv(ValueError):
    pass


def _num(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".")


def _range(vals: Sequence[float]) -> tuple[float, float]:
    lo, hi = min(vals), max(vals)
    if hi == lo:
        pad = abs(lo) * 0.05 or 1.0
        return lo - pad, hi + pad
    return lo, hi


def line_plot_svg(
    xs: Sequence[float],
    series: dict[str, Sequence[Optional[float]]],
    title: str,
    xlabel: str,
    ylabel: str,
    legend: bool = False,
) -> str:
    """Render one or more y-series over shared ``xs``.

    ``None`` entries break a line into separate polyline segments.
    """
    ys_all = [y for ys in series.values() for y in ys if y is not None]
    x0, x1 = _range(xs)
    y0, y1 = _range(ys_all) if ys_all else (0.0, 1.0)
    pw, ph = W - LEFT - RIGHT, H - TOP - BOTTOM

    def sx(x):
        return LEFT + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return TOP + ph - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W / 2}" y="22" text-anchor="middle" font-family="sans-serif" font-size="15">{escape(title)}</text>',
        f'<line x1="{LEFT}" y1="{TOP + ph}" x2="{LEFT + pw}" y2="{TOP + ph}" stroke="black"/>',
        f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{TOP + ph}" stroke="black"/>',
    ]
    for i in range(5):
        xv = x0 + (x1 - x0) * i / 4
        yv = y0 + (y1 - y0) * i / 4
        out.append(
            f'<text x="{_num(sx(xv))}" y="{TOP + ph + 16}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="11">{_num(xv)}</text>'
        )
        out.append(
            f'<text x="{LEFT - 6}" y="{_num(sy(yv) + 4)}" text-anchor="end" font-family="sans-serif" '
            f'font-size="11">{_num(yv)}</text>'
        )
    out.append(
        f'<text x="{LEFT + pw / 2}" y="{H - 10}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="12">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="16" y="{TOP + ph / 2}" text-anchor="middle" font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {TOP + ph / 2})">{escape(ylabel)}</text>'
    )
    for n, (name, ys) in enumerate(series.items()):
        color = PALETTE[n % len(PALETTE)]
        segs, cur = [], []
        for x, y in zip(xs, ys):
            if y is None or not math.isfinite(y):
                if cur:
                    segs.append(cur)
                cur = []
                continue
            cur.append(f"{_num(sx(x))},{_num(sy(y))}")
        if cur:
            segs.append(cur)
        for seg in segs:
            out.append(
                f'<polyline class="series" data-name="{escape(name)}" fill="none" stroke="{color}" '
                f'stroke-width="1.5" points="{" ".join(seg)}"/>'
            )
    if legend:
        out.append('<g class="legend">')
        for n, name in enumerate(series):
            ly = TOP + 8 + 16 * n
            color = PALETTE[n % len(PALETTE)]
            out.append(
                f'<line x1="{LEFT + pw - 120}" y1="{ly}" x2="{LEFT + pw - 100}" y2="{ly}" stroke="{color}" '
                f'stroke-width="2"/>'
            )
            out.append(
                f'<text x="{LEFT + pw - 95}" y="{ly + 4}" font-family="sans-serif" font-size="11">{escape(name)}</text>'
            )
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _read_table(path: Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or not rows[0]:
        raise MalformedCsv(f"{path}: empty file")
    header, body = rows[0], rows[1:]
    if not body:
        raise MalformedCsv(f"{path}: header only, no data rows")
    if header[0] != "t":
        raise MalformedCsv(f"{path}: first column must be 't'")
    for n, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise MalformedCsv(f"{path}: line {n} has {len(row)} fields, expected {len(header)}")
    return header, body


def _col(body: list[list[str]], j: int, path: Path, name: str) -> list[Optional[float]]:
    out = []
    for n, row in enumerate(body, start=2):
        cell = row[j]
        if cell == "":
            out.append(None)
            continue
        try:
            out.append(float(cell))
        except ValueError:
            raise MalformedCsv(f"{path}: line {n} column {name!r} is not a number: {cell!r}") from None
    return out


def plot_files(csv_path: Path) -> dict[str, str]:
    """SVG documents for a metrics.csv (five plots) or a comparison.csv (one overlay)."""
    csv_path = Path(csv_path)
    header, body = _read_table(csv_path)
    xs = _col(body, 0, csv_path, "t")
    if any(x is None for x in xs):
        raise MalformedCsv(f"{csv_path}: missing t value")
    if tuple(header) == METRIC_COLUMNS:
        files = {}
        for col, (stem, ylabel) in METRIC_PLOTS.items():
            ys = _col(body, header.index(col), csv_path, col)
            files[f"{stem}.svg"] = line_plot_svg(xs, {col: ys}, f"{col} vs t", "t (iteration)", ylabel)
        return files
    if len(header) < 2:
        raise MalformedCsv(f"{csv_path}: no data columns")
    series = {name: _col(body, j, csv_path, name) for j, name in enumerate(header) if j > 0}
    return {"comparison.svg": comparison_svg(xs, series)}


def comparison_svg(xs: Sequence[float], series: dict[str, Sequence[Optional[float]]]) -> str:
    return line_plot_svg(
        xs, series, "mean target distance by search strategy", "t (iteration)",
        "mean distance to nearest USV", legend=True,
    )

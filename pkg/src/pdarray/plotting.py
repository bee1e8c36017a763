"""Log-scale line charts of sweep CSVs, written as standalone SVG."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional
from xml.sax.saxutils import escape

from .errors import CsvParseError
from .sweeps import HEADERS, SweepKind

__all__ = ["PlotSpec", "read_sweep_csv", "build_svg", "render_plot"]

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")
_DASHES = ("", "6,4", "2,3", "8,3,2,3")
_SHADE = "#f4b6c9"


@dataclass(frozen=True)
class PlotSpec:
    title: Optional[str] = None
    width: int = 720
    height: int = 480
    log_x: bool = True
    shade_verdict: bool = True


_NUMERIC = {"M", "G", "xi", "gamma_star_db", "gamma_star", "beta_min_sq", "floor", "rho", "rho0", "beta_sq"}


def read_sweep_csv(path):
    """Parse a sweep CSV; returns ``(kind, rows)`` with numeric columns converted."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvParseError("empty CSV, no header", line=1) from None
        kind = next((k for k, cols in HEADERS.items() if cols == header), None)
        if kind is None:
            raise CsvParseError(f"unrecognized header {header!r}", line=1)
        rows = []
        for record in reader:
            line = reader.line_num
            if not record:
                continue
            if len(record) != len(header):
                raise CsvParseError(f"expected {len(header)} fields, got {len(record)}", line=line)
            row = {}
            for col, raw in zip(header, record):
                if col in _NUMERIC:
                    try:
                        row[col] = float(raw)
                    except ValueError:
                        raise CsvParseError(f"column {col!r}: not a number: {raw!r}", line=line) from None
                else:
                    row[col] = raw
            rows.append(row)
    if not rows:
        raise CsvParseError("CSV has a header but no data rows", line=2)
    return kind, rows


def _series(kind, rows):
    groups = {}
    if kind is SweepKind.BETA_MIN:
        for r in rows:
            key = f"xi={r['xi']:g}, {r['gamma_star_db']:g} dB"
            groups.setdefault(key, []).append((r["M"], r["beta_min_sq"]))
        ylabel = "minimum loss factor beta_min^2"
    else:
        param = "rho" if kind is SweepKind.BETA_FIXED_RHO else "rho0"
        for r in rows:
            key = f"{r['beam']}, {param}={r[param]:g}"
            groups.setdefault(key, []).append((r["M"], r["beta_sq"]))
        ylabel = "loss factor beta^2"
    return groups, ylabel


def _verdict_curve(kind, rows):
    if kind is SweepKind.BETA_MIN:
        return []
    curve = {}
    for r in rows:
        curve.setdefault(r["M"], r["beta_min_sq"])
    return sorted(curve.items())


def build_svg(kind, rows, spec: PlotSpec = PlotSpec()) -> str:
    groups, ylabel = _series(kind, rows)
    verdict = _verdict_curve(kind, rows) if spec.shade_verdict else []

    points = [p for pts in groups.values() for p in pts if p[1] > 0]
    points += [p for p in verdict if p[1] > 0]
    if not points:
        raise CsvParseError("no positive values to draw on a log axis")
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]

    def x_of(v):
        return math.log10(v) if spec.log_x else v

    x_lo, x_hi = x_of(min(xs)), x_of(max(xs))
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    y_lo = math.floor(math.log10(min(ys)))
    y_hi = max(math.ceil(math.log10(max(ys))), y_lo + 1)

    left, right, top, bottom = 80, 190, 40, 60
    pw = spec.width - left - right
    ph = spec.height - top - bottom

    def px(x):
        return left + (x_of(x) - x_lo) / (x_hi - x_lo) * pw

    def py(y):
        return top + (y_hi - math.log10(y)) / (y_hi - y_lo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{spec.width}" height="{spec.height}" '
        f'viewBox="0 0 {spec.width} {spec.height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{spec.width}" height="{spec.height}" fill="white"/>',
    ]
    if spec.title:
        out.append(f'<text x="{spec.width / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(spec.title)}</text>')

    if verdict:
        pos = [(m, b) for m, b in verdict if b > 0]
        upper = [f"{px(m):.2f},{top:.2f}" for m, _ in reversed(pos)]
        lower = [f"{px(m):.2f},{py(min(max(b, 10.0 ** y_lo), 10.0 ** y_hi)):.2f}" for m, b in pos]
        out.append(
            f'<polygon class="verdict-region" fill="{_SHADE}" fill-opacity="0.45" stroke="none" '
            f'points="{" ".join(lower + upper)}"/>'
        )

    # axes and decade grid
    out.append(f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    for e in range(y_lo, y_hi + 1):
        y = py(10.0 ** e)
        out.append(f'<line x1="{left}" y1="{y:.2f}" x2="{left + pw}" y2="{y:.2f}" stroke="#dddddd"/>')
        out.append(f'<text x="{left - 6}" y="{y + 4:.2f}" text-anchor="end">1e{e}</text>')
    if spec.log_x:
        for e in range(math.floor(x_lo), math.ceil(x_hi) + 1):
            if x_lo - 1e-9 <= e <= x_hi + 1e-9:
                x = px(10.0 ** e)
                out.append(f'<line x1="{x:.2f}" y1="{top}" x2="{x:.2f}" y2="{top + ph}" stroke="#dddddd"/>')
                out.append(f'<text x="{x:.2f}" y="{top + ph + 16}" text-anchor="middle">1e{e}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{spec.height - 18}" text-anchor="middle">number of PDs M</text>')
    out.append(
        f'<text x="18" y="{top + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {top + ph / 2:.1f})">{escape(ylabel)}</text>'
    )

    for i, (label, pts) in enumerate(groups.items()):
        pts = sorted(p for p in pts if p[1] > 0)
        color = _PALETTE[i % len(_PALETTE)]
        dash = _DASHES[(i // len(_PALETTE)) % len(_DASHES)]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        coords = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in pts)
        out.append(
            f'<polyline class="series" data-label="{escape(label)}" fill="none" stroke="{color}" '
            f'stroke-width="1.8"{dash_attr} points="{coords}"/>'
        )
        ly = top + 14 + 18 * i
        out.append(f'<line x1="{left + pw + 12}" y1="{ly}" x2="{left + pw + 36}" y2="{ly}" stroke="{color}" stroke-width="1.8"{dash_attr}/>')
        out.append(f'<text x="{left + pw + 42}" y="{ly + 4}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_plot(csv_path, svg_path, plot_spec: PlotSpec = PlotSpec()) -> Path:
    """Render a sweep CSV as SVG. Nothing is written if the CSV cannot be parsed."""
    kind, rows = read_sweep_csv(csv_path)
    svg = build_svg(kind, rows, plot_spec)
    svg_path = Path(svg_path)
    svg_path.write_text(svg)
    return svg_path

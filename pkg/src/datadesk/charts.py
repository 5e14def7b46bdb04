"""Chart-ready data for histograms, scatter/line series and bar charts.

Charts are computed as data, not pixels; the UI renders them client-side.
:func:`render_svg` exists for CLI parity and produces deterministic
standalone SVG.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date
from xml.sax.saxutils import escape

from .errors import (
    AllMissingError,
    EmptyDataError,
    NonNumericColumnError,
    TypeMismatchError,
    ZeroBinsError,
)
from .ops import FrequencyTable
from .table import Table


@dataclass(frozen=True)
class HistogramData:
    """Equal-width bins: n_bins+1 ascending edges and n_bins counts."""

    edges: tuple
    counts: tuple
    n_used: int


@dataclass(frozen=True)
class XYSeries:
    """Pairwise-complete (x, y) points; line series sorted by x."""

    points: tuple
    kind: str  # "scatter" | "line"


@dataclass(frozen=True)
class SeriesPlotData:
    """A time-indexed line with an optional horizontal reference line."""

    times: tuple
    values: tuple
    reference_line: object = None  # float | None


def sturges_bins(n: int) -> int:
    return int(math.ceil(math.log2(n) + 1)) if n > 1 else 1


def histogram(table: Table, column: str, n_bins=None) -> HistogramData:
    """Bin a numeric column; auto bin count is Sturges, ceil(log2(n)+1).

    Bins are left-closed right-open over [min, max] with the last bin
    closed; a degenerate range (max == min) is widened to [v-0.5, v+0.5].
    """
    col = table.column(column)
    if not col.is_numeric:
        raise NonNumericColumnError(f"{column!r} is {col.dtype}")
    values = [float(v) for v in col.non_missing()]
    if not values:
        raise AllMissingError(f"column {column!r} has no non-missing values")
    if n_bins is None:
        n_bins = sturges_bins(len(values))
    if n_bins < 1:
        raise ZeroBinsError("n_bins must be >= 1")

    lo, hi = min(values), max(values)
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    width = (hi - lo) / n_bins
    edges = tuple(lo + i * width for i in range(n_bins)) + (hi,)
    counts = [0] * n_bins
    for v in values:
        idx = int((v - lo) / width)
        if idx >= n_bins:  # v == hi falls in the closed last bin
            idx = n_bins - 1
        counts[idx] += 1
    return HistogramData(edges=edges, counts=tuple(counts), n_used=len(values))


def xy_series(table: Table, x: str, y: str, kind: str = "scatter") -> XYSeries:
    """Pairwise-complete points of y against x (numeric or date x)."""
    if kind not in ("scatter", "line"):
        raise TypeMismatchError(f"unknown series kind {kind!r}")
    xcol = table.column(x)
    ycol = table.column(y)
    if xcol.dtype not in ("integer", "real", "date"):
        raise TypeMismatchError(f"x column {x!r} must be numeric or date")
    if not ycol.is_numeric:
        raise TypeMismatchError(f"y column {y!r} must be numeric")
    points = [
        (xv if isinstance(xv, date) else float(xv), float(yv))
        for xv, yv in zip(xcol.cells, ycol.cells)
        if xv is not None and yv is not None
    ]
    if kind == "line":
        points.sort(key=lambda p: p[0])  # stable: ties keep input order
    return XYSeries(points=tuple(points), kind=kind)


# --- SVG rendering ----------------------------------------------------------

_MARGIN = 42.0


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _ticks(lo: float, hi: float, n: int = 5) -> list:
    if hi == lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min(s * mag for s in (1, 2, 5, 10) if s * mag >= raw)
    start = math.ceil(lo / step) * step
    out = []
    t = start
    while t <= hi + step * 1e-9:
        out.append(round(t / step) * step)
        t += step
    return out


class _Canvas:
    """Minimal axis-aware SVG assembler."""

    def __init__(self, width: float, height: float,
                 xlim: tuple, ylim: tuple):
        self.width = width
        self.height = height
        self.xlim = xlim
        self.ylim = ylim
        self.parts = []

    def px(self, x: float) -> float:
        lo, hi = self.xlim
        span = (hi - lo) or 1.0
        return _MARGIN + (x - lo) / span * (self.width - 2 * _MARGIN)

    def py(self, y: float) -> float:
        lo, hi = self.ylim
        span = (hi - lo) or 1.0
        return self.height - _MARGIN - (y - lo) / span * (self.height - 2 * _MARGIN)

    def add(self, fragment: str) -> None:
        self.parts.append(fragment)

    def axes(self, x_labels=None) -> None:
        x0, x1 = _MARGIN, self.width - _MARGIN
        y0, y1 = self.height - _MARGIN, _MARGIN
        self.add(f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" '
                 f'y2="{_fmt(y0)}" stroke="black"/>')
        self.add(f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x0)}" '
                 f'y2="{_fmt(y1)}" stroke="black"/>')
        for t in _ticks(*self.ylim):
            py = self.py(t)
            self.add(f'<line x1="{_fmt(x0 - 4)}" y1="{_fmt(py)}" '
                     f'x2="{_fmt(x0)}" y2="{_fmt(py)}" stroke="black"/>')
            self.add(f'<text x="{_fmt(x0 - 6)}" y="{_fmt(py + 3)}" '
                     f'font-size="10" text-anchor="end">{_fmt(t)}</text>')
        if x_labels is None:
            for t in _ticks(*self.xlim):
                px = self.px(t)
                self.add(f'<line x1="{_fmt(px)}" y1="{_fmt(y0)}" '
                         f'x2="{_fmt(px)}" y2="{_fmt(y0 + 4)}" stroke="black"/>')
                self.add(f'<text x="{_fmt(px)}" y="{_fmt(y0 + 14)}" '
                         f'font-size="10" text-anchor="middle">{_fmt(t)}</text>')
        else:
            for x, label in x_labels:
                px = self.px(x)
                self.add(f'<text x="{_fmt(px)}" y="{_fmt(y0 + 14)}" '
                         f'font-size="10" text-anchor="middle">'
                         f'{escape(label)}</text>')

    def render(self) -> str:
        body = "\n".join(self.parts)
        return (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{_fmt(self.width)}" height="{_fmt(self.height)}" '
            f'viewBox="0 0 {_fmt(self.width)} {_fmt(self.height)}">\n'
            f'{body}\n</svg>\n'
        )


def _x_of(point_x) -> float:
    return float(point_x.toordinal()) if isinstance(point_x, date) else point_x


def render_svg(data, size=(640, 400)) -> str:
    """Render chart data as standalone SVG 1.1 text (deterministic)."""
    width, height = float(size[0]), float(size[1])
    if isinstance(data, HistogramData):
        if not data.counts:
            raise EmptyDataError("histogram has no bins")
        c = _Canvas(width, height, (data.edges[0], data.edges[-1]),
                    (0.0, float(max(data.counts)) or 1.0))
        for i, count in enumerate(data.counts):
            x0, x1 = c.px(data.edges[i]), c.px(data.edges[i + 1])
            y0, y1 = c.py(0.0), c.py(float(count))
            c.add(f'<rect x="{_fmt(x0)}" y="{_fmt(y1)}" '
                  f'width="{_fmt(x1 - x0)}" height="{_fmt(y0 - y1)}" '
                  f'fill="steelblue" stroke="white"/>')
        c.axes()
        return c.render()

    if isinstance(data, XYSeries):
        if not data.points:
            raise EmptyDataError("series has no points")
        xs = [_x_of(p[0]) for p in data.points]
        ys = [p[1] for p in data.points]
        c = _Canvas(width, height, (min(xs), max(xs)), (min(ys), max(ys)))
        if data.kind == "line":
            pts = " ".join(f"{_fmt(c.px(x))},{_fmt(c.py(y))}"
                           for x, y in zip(xs, ys))
            c.add(f'<polyline points="{pts}" fill="none" stroke="steelblue"/>')
        else:
            for x, y in zip(xs, ys):
                c.add(f'<circle cx="{_fmt(c.px(x))}" cy="{_fmt(c.py(y))}" '
                      f'r="2.5" fill="steelblue"/>')
        c.axes()
        return c.render()

    if isinstance(data, FrequencyTable):
        if not data.entries:
            raise EmptyDataError("frequency table is empty")
        n = len(data.entries)
        c = _Canvas(width, height, (0.0, float(n)),
                    (0.0, float(max(cnt for _, cnt in data.entries))))
        labels = []
        for i, (level, count) in enumerate(data.entries):
            x0, x1 = c.px(i + 0.1), c.px(i + 0.9)
            y0, y1 = c.py(0.0), c.py(float(count))
            c.add(f'<rect x="{_fmt(x0)}" y="{_fmt(y1)}" '
                  f'width="{_fmt(x1 - x0)}" height="{_fmt(y0 - y1)}" '
                  f'fill="steelblue"/>')
            labels.append((i + 0.5, level))
        c.axes(x_labels=labels)
        return c.render()

    if isinstance(data, SeriesPlotData):
        if not data.values:
            raise EmptyDataError("series plot has no values")
        ys = list(data.values)
        ylo, yhi = min(ys), max(ys)
        if data.reference_line is not None:
            ylo = min(ylo, data.reference_line)
            yhi = max(yhi, data.reference_line)
        c = _Canvas(width, height, (0.0, float(len(ys) - 1) or 1.0),
                    (ylo, yhi))
        pts = " ".join(f"{_fmt(c.px(float(i)))},{_fmt(c.py(y))}"
                       for i, y in enumerate(ys))
        c.add(f'<polyline points="{pts}" fill="none" stroke="steelblue"/>')
        if data.reference_line is not None:
            py = c.py(data.reference_line)
            c.add(f'<line x1="{_fmt(c.px(0.0))}" y1="{_fmt(py)}" '
                  f'x2="{_fmt(c.px(float(len(ys) - 1)))}" y2="{_fmt(py)}" '
                  f'stroke="firebrick" stroke-dasharray="4 3"/>')
        step = max(1, len(ys) // 8)
        labels = [(float(i), data.times[i])
                  for i in range(0, len(ys), step)]
        c.axes(x_labels=labels)
        return c.render()

    raise EmptyDataError(f"cannot render {type(data).__name__}")

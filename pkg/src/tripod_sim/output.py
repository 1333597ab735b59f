"""Deterministic CSV emission and minimal SVG plots.

CSV is the canonical output: fixed headers, 17-significant-digit values
(lossless float round trip), LF newlines and no trailing blank line, so
identical inputs produce byte-identical files.  SVG output is a bare
polyline or grayscale cell grid for quick looks, nothing more.
"""

from __future__ import annotations

import numpy as np

from .model import Trajectory
from .spectra import Map2D, SpectrumSeries

SPECTRUM_HEADER = "delta_p_khz,im_rho24,re_rho24,re_rho12,re_rho13,re_rho23,rho44"
MAP_HEADER = "delta_khz,delta_p_khz,im_rho24"
TRAJECTORY_HEADER = "t_ms,rho11,rho22,rho33,rho44,re_rho12,re_rho13,re_rho23,im_rho24"


def _fmt(value: float) -> str:
    return format(float(value), ".16e")


def _write_lines(lines, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write("\n".join(lines) + "\n")


def write_spectrum_csv(series: SpectrumSeries, path) -> None:
    """Canonical spectrum format: header plus one row per axis point."""
    lines = [SPECTRUM_HEADER]
    for k in range(len(series.axis)):
        lines.append(",".join(_fmt(col[k]) for col in (
            series.axis, series.im_rho24, series.re_rho24,
            series.re_rho12, series.re_rho13, series.re_rho23, series.rho44)))
    _write_lines(lines, path)


def read_spectrum_csv(path) -> SpectrumSeries:
    """Inverse of write_spectrum_csv (canonical columns only)."""
    with open(path, "r", encoding="utf-8", newline="") as handle:
        content = handle.read()
    lines = content.splitlines()
    if not lines or lines[0] != SPECTRUM_HEADER:
        raise ValueError(f"not a spectrum CSV: bad header in {path}")
    rows = np.array([[float(cell) for cell in line.split(",")] for line in lines[1:]])
    if rows.shape[1] != 7:
        raise ValueError(f"expected 7 columns, got {rows.shape[1]}")
    return SpectrumSeries(
        axis_name="delta_p_khz", axis=rows[:, 0],
        im_rho24=rows[:, 1], re_rho24=rows[:, 2], re_rho12=rows[:, 3],
        re_rho13=rows[:, 4], re_rho23=rows[:, 5], rho44=rows[:, 6])


def write_map_csv(map2d: Map2D, path) -> None:
    """Long format, row-major in delta then delta_p."""
    lines = [MAP_HEADER]
    for i, delta in enumerate(map2d.delta_axis):
        for j, dp in enumerate(map2d.dp_axis):
            lines.append(f"{_fmt(delta)},{_fmt(dp)},{_fmt(map2d.grid[i, j])}")
    _write_lines(lines, path)


def write_trajectory_csv(trajectory: Trajectory, path) -> None:
    lines = [TRAJECTORY_HEADER]
    for t, rho in trajectory:
        cells = [t, rho[0, 0].real, rho[1, 1].real, rho[2, 2].real, rho[3, 3].real,
                 rho[0, 1].real, rho[0, 2].real, rho[1, 2].real, rho[3, 1].imag]
        lines.append(",".join(_fmt(c) for c in cells))
    _write_lines(lines, path)


# ---------------------------------------------------------------------------
# SVG

_W, _H = 880, 560
_MARGIN = 60


def _scale(values, lo, hi, out_lo, out_hi):
    span = hi - lo
    if span == 0:
        span = 1.0
    return out_lo + (np.asarray(values) - lo) * (out_hi - out_lo) / span


def write_line_svg(series: SpectrumSeries, path, column: str = "im_rho24") -> None:
    """Single polyline of one column against the sweep axis."""
    y = series.column(column)
    x = series.axis
    ylo, yhi = float(np.min(y)), float(np.max(y))
    px = _scale(x, float(x[0]), float(x[-1]), _MARGIN, _W - _MARGIN)
    py = _scale(y, ylo, yhi, _H - _MARGIN, _MARGIN)
    points = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<line x1="{_MARGIN}" y1="{_H - _MARGIN}" x2="{_W - _MARGIN}" '
        f'y2="{_H - _MARGIN}" stroke="black"/>',
        f'<line x1="{_MARGIN}" y1="{_MARGIN}" x2="{_MARGIN}" '
        f'y2="{_H - _MARGIN}" stroke="black"/>',
        f'<polyline fill="none" stroke="crimson" stroke-width="1.5" points="{points}"/>',
        f'<text x="{_W // 2}" y="{_H - 20}" text-anchor="middle" '
        f'font-size="14">{series.axis_name}</text>',
        f'<text x="{_MARGIN}" y="{_MARGIN - 10}" font-size="14">{column}</text>',
        f'<text x="{_MARGIN - 6}" y="{_H - _MARGIN}" text-anchor="end" '
        f'font-size="12">{ylo:.3g}</text>',
        f'<text x="{_MARGIN - 6}" y="{_MARGIN + 4}" text-anchor="end" '
        f'font-size="12">{yhi:.3g}</text>',
        "</svg>",
    ]
    _write_lines(lines, path)


def write_heatmap_svg(map2d: Map2D, path) -> None:
    """Grayscale cell grid of the absorption map (white = maximum)."""
    grid = map2d.grid
    lo, hi = float(grid.min()), float(grid.max())
    span = hi - lo if hi > lo else 1.0
    nd, npts = grid.shape
    cell_w = (_W - 2 * _MARGIN) / npts
    cell_h = (_H - 2 * _MARGIN) / nd
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
    ]
    for i in range(nd):
        for j in range(npts):
            level = int(round(255 * (grid[i, j] - lo) / span))
            x = _MARGIN + j * cell_w
            y = _H - _MARGIN - (i + 1) * cell_h
            lines.append(
                f'<rect x="{x:.2f}" y="{y:.2f}" width="{cell_w + 0.5:.2f}" '
                f'height="{cell_h + 0.5:.2f}" '
                f'fill="rgb({level},{level},{level})"/>')
    lines.append(
        f'<text x="{_W // 2}" y="{_H - 20}" text-anchor="middle" '
        f'font-size="14">delta_p_khz</text>')
    lines.append(
        f'<text x="{_MARGIN}" y="{_MARGIN - 10}" font-size="14">delta_khz</text>')
    lines.append("</svg>")
    _write_lines(lines, path)

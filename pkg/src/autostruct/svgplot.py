"""Deterministic SVG drawings of word paths on the rank-2 lattice.

Each word becomes one polyline over the grid.  When a drawing retraces a
lattice edge (loops do this constantly), every revisit is shifted sideways
by a fixed 6% of the cell size so all traversals stay visible; the revisit
count is global across the words in draw order, which keeps the output a
pure function of the input.  Coordinates are always written with two
decimals so the bytes are reproducible across platforms.
"""
from __future__ import annotations

from typing import Optional, Sequence

from .errors import PlotError
from .groups import FreeAbelianBackend, GroupBackend

# Blue, orange, green; fourth color unused by the CLI (2-3 words).
PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd")
_JITTER = 0.06
_LEGEND_LINE = 18
_MARGIN = 24


def plot_svg(backend: GroupBackend, words: Sequence[str],
             colors: Optional[Sequence[str]] = None, cell: int = 40) -> str:
    """Render the paths of the given words as an SVG document string."""
    if not isinstance(backend, FreeAbelianBackend) or backend.rank != 2:
        raise PlotError("plots need a rank-2 free abelian backend")
    if not words:
        raise PlotError("nothing to plot")
    if colors is None:
        colors = PALETTE
    if len(colors) < len(words):
        raise PlotError("more words than colors")
    paths = [_points(backend, word) for word in words]

    xs = [p[0] for path in paths for p in path]
    ys = [p[1] for path in paths for p in path]
    min_x, max_x = min(xs) - 1, max(xs) + 1
    min_y, max_y = min(ys) - 1, max(ys) + 1
    legend_height = _LEGEND_LINE * (len(words) + 1)
    width = (max_x - min_x) * cell + 2 * _MARGIN
    height = (max_y - min_y) * cell + 2 * _MARGIN + legend_height

    def sx(x: float) -> float:
        return _MARGIN + (x - min_x) * cell

    def sy(y: float) -> float:
        return _MARGIN + legend_height + (max_y - y) * cell

    out: list[str] = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(f'<svg xmlns="http://www.w3.org/2000/svg" '
               f'width="{width}" height="{height}" '
               f'viewBox="0 0 {width} {height}">')
    out.append(f'<rect width="{width}" height="{height}" fill="white"/>')
    for gx in range(min_x, max_x + 1):
        out.append(_line(sx(gx), sy(min_y), sx(gx), sy(max_y),
                         "#dddddd", 1))
    for gy in range(min_y, max_y + 1):
        out.append(_line(sx(min_x), sy(gy), sx(max_x), sy(gy),
                         "#dddddd", 1))
    out.append(f'<circle cx="{_fmt(sx(0))}" cy="{_fmt(sy(0))}" r="3.00" '
               f'fill="#555555"/>')

    edge_visits: dict[tuple, int] = {}
    for path, word, color in zip(paths, words, colors):
        if len(path) == 1:
            out.append(f'<circle cx="{_fmt(sx(path[0][0]))}" '
                       f'cy="{_fmt(sy(path[0][1]))}" r="5.00" '
                       f'fill="none" stroke="{color}" stroke-width="2"/>')
            continue
        rendered = [(sx(path[0][0]), sy(path[0][1]))]
        for prev, here in zip(path, path[1:]):
            dx, dy = here[0] - prev[0], here[1] - prev[1]
            key = (min(prev, here), max(prev, here))
            count = edge_visits.get(key, 0)
            edge_visits[key] = count + 1
            if dx or dy:
                length = (dx * dx + dy * dy) ** 0.5
                off_x = -dy / length * _JITTER * cell * count
                off_y = dx / length * _JITTER * cell * count
            else:
                off_x = off_y = 0.0
            rendered.append((sx(here[0]) + off_x, sy(here[1]) - off_y))
        points = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in rendered)
        out.append(f'<polyline points="{points}" fill="none" '
                   f'stroke="{color}" stroke-width="2" '
                   f'stroke-linejoin="round"/>')

    for i, (word, color) in enumerate(zip(words, colors)):
        ly = _MARGIN // 2 + _LEGEND_LINE * (i + 1)
        out.append(_line(_MARGIN, ly - 4, _MARGIN + 24, ly - 4, color, 3))
        label = word if word else "(empty word)"
        out.append(f'<text x="{_MARGIN + 32}" y="{ly}" '
                   f'font-family="monospace" font-size="13">'
                   f'{_escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _points(backend: GroupBackend, word: str) -> list[tuple[int, int]]:
    pts = [backend.identity()]
    for letter in word:
        if letter not in backend.alphabet:
            raise PlotError(f"letter {letter!r} is not in the alphabet")
        pts.append(backend.multiply(pts[-1], backend.images[letter]))
    return pts


def _line(x1: float, y1: float, x2: float, y2: float, color: str,
          width: int) -> str:
    return (f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" '
            f'y2="{_fmt(y2)}" stroke="{color}" stroke-width="{width}"/>')


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;"))

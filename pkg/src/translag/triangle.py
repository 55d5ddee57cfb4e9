"""Triangle scatter rendering: grid binning and standalone SVG output.

Articles sharing a rounded grid cell collapse into one bin whose circle
radius grows with the log of the bin count. The drawing is a fixed frame:
the A/C/H triangle outline, a dashed translational axis up the x = 0 line,
and one circle per bin, colored by a per-label CSS class.
"""

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .classify import LABELS, SQRT3_2, VERTEX_A, VERTEX_C, VERTEX_H

_IN_TRIANGLE_TOL = 1e-9

# Default palette; renderers can restyle via the emitted classes instead.
_LABEL_COLORS = {
    "A": "#1f77b4",
    "C": "#ff7f0e",
    "H": "#2ca02c",
    "AC": "#d62728",
    "CH": "#9467bd",
    "AH": "#8c564b",
    "ACH": "#e377c2",
    "Other": "#7f7f7f",
}
_UNLABELED_COLOR = "#555555"


@dataclass(frozen=True, slots=True)
class TriangleBin:
    """One grid cell's aggregate: center, article count, dominant label."""

    bx: float
    by: float
    count: int
    label: Optional[str] = None


@dataclass(frozen=True, slots=True)
class PlotOptions:
    width: int = 800
    height: int = 700
    margin: float = 60.0
    r_min: float = 1.0
    r_max: float = 20.0

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("canvas dimensions must be positive")
        if self.margin < 0 or 2 * self.margin >= min(self.width, self.height):
            raise ValueError("margin must be nonnegative and leave a drawable area")
        if not (0 < self.r_min <= self.r_max):
            raise ValueError("radius bounds must satisfy 0 < r_min <= r_max")


def _fractions(x: float, y: float) -> tuple[float, float, float]:
    f_h = (2.0 * y + 1.0) / 3.0
    diff = x / SQRT3_2
    f_a = ((1.0 - f_h) + diff) / 2.0
    f_c = ((1.0 - f_h) - diff) / 2.0
    return f_a, f_c, f_h


def _inside(x: float, y: float, tol: float = _IN_TRIANGLE_TOL) -> bool:
    return all(-tol <= f <= 1.0 + tol for f in _fractions(x, y))


def _clamp_to_triangle(x: float, y: float) -> tuple[float, float]:
    """Project a nearby outside point back onto the triangle.

    Rounding a coordinate to cell centers can step just past an edge (for
    example x = sqrt(3)/2 rounds to 0.87 at resolution 100); clamping the
    barycentric weights restores the bin-center invariant.
    """
    if _inside(x, y):
        return x, y
    weights = [max(0.0, f) for f in _fractions(x, y)]
    total = sum(weights)
    f_a, f_c, f_h = (w / total for w in weights)
    return (f_a - f_c) * SQRT3_2, -f_a / 2.0 - f_c / 2.0 + f_h


def bin_points(
    items: Iterable[Sequence], resolution: int = 100
) -> list[TriangleBin]:
    """Aggregate coordinates into grid cells of side 1/resolution.

    Each item is (x, y), (x, y, pmid), or (x, y, pmid, label). Points
    sharing a rounded cell merge into one bin at the cell center (clamped
    onto the triangle); a bin's label is the most frequent label among its
    points, alphabetically first on ties. Out-of-triangle points raise a
    ValueError naming the pmid when one was given.
    """
    if resolution <= 0:
        raise ValueError("resolution must be a positive integer")
    cells: dict[tuple[int, int], int] = {}
    cell_labels: dict[tuple[int, int], Counter] = {}
    for item in items:
        x, y = float(item[0]), float(item[1])
        pmid = item[2] if len(item) > 2 else None
        label = item[3] if len(item) > 3 else None
        if not _inside(x, y):
            where = f" for pmid {pmid}" if pmid is not None else ""
            raise ValueError(f"point ({x}, {y}){where} lies outside the triangle")
        if label is not None and label not in LABELS:
            raise ValueError(f"unknown label {label!r}")
        cell = (round(x * resolution), round(y * resolution))
        cells[cell] = cells.get(cell, 0) + 1
        if label is not None:
            cell_labels.setdefault(cell, Counter())[label] += 1
    bins = []
    for cell in sorted(cells):
        bx, by = _clamp_to_triangle(cell[0] / resolution, cell[1] / resolution)
        label = None
        counter = cell_labels.get(cell)
        if counter:
            top = max(counter.values())
            label = min(name for name, n in counter.items() if n == top)
        bins.append(TriangleBin(bx, by, cells[cell], label))
    return bins


def classification_points(classifications) -> Iterable[tuple[float, float, int, str]]:
    """Adapt labeled classifications to bin_points items; Other is skipped."""
    for cls in classifications:
        if cls.coord is None:
            continue
        yield cls.coord[0], cls.coord[1], cls.pmid, cls.label


class _Projection:
    """Plane-to-pixel map: centered, aspect-preserving, y flipped."""

    def __init__(self, options: PlotOptions):
        usable_w = options.width - 2.0 * options.margin
        usable_h = options.height - 2.0 * options.margin
        self.scale = min(usable_w / (2.0 * SQRT3_2), usable_h / 1.5)
        self.cx = options.width / 2.0
        # Plane bounding box is y in [-1/2, 1]; its midpoint is 1/4.
        self.cy = options.height / 2.0
        self.mid_y = 0.25

    def __call__(self, x: float, y: float) -> tuple[float, float]:
        return self.cx + x * self.scale, self.cy - (y - self.mid_y) * self.scale


def _radius(count: int, max_count: int, options: PlotOptions) -> float:
    if count <= 1 or max_count <= 1:
        return options.r_min
    span = options.r_max - options.r_min
    return options.r_min + span * math.log(count) / math.log(max_count)


def render_svg(bins: Iterable[TriangleBin], options: PlotOptions = PlotOptions()) -> str:
    """Render bins as a standalone SVG 1.1 document string.

    Larger bins are drawn first so small neighbors stay visible. The frame
    is always present: triangle outline, dashed axis from the A-C edge
    midpoint (0, -1/2) to the H vertex, and the three vertex labels.
    """
    bins = list(bins)
    project = _Projection(options)
    vertex_px = {name: project(*v) for name, v in (("A", VERTEX_A), ("C", VERTEX_C), ("H", VERTEX_H))}
    polygon_points = " ".join(f"{px:.2f},{py:.2f}" for px, py in vertex_px.values())
    axis_top = project(0.0, 1.0)
    axis_bottom = project(0.0, -0.5)

    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{options.width}" height="{options.height}" '
        f'viewBox="0 0 {options.width} {options.height}">',
        "<style>",
        "  .frame { fill: none; stroke: #333; stroke-width: 1.5; }",
        "  .axis { stroke: #36c; stroke-width: 1.2; stroke-dasharray: 6 4; }",
        "  .vertex-label { font: 16px sans-serif; text-anchor: middle; }",
        "  .bin { fill-opacity: 0.55; stroke: none; }",
        *(f"  .bin-{label} {{ fill: {color}; }}" for label, color in _LABEL_COLORS.items()),
        f"  .bin-unlabeled {{ fill: {_UNLABELED_COLOR}; }}",
        "</style>",
        f'<polygon class="frame" points="{polygon_points}"/>',
        f'<line class="axis" x1="{axis_bottom[0]:.2f}" y1="{axis_bottom[1]:.2f}" '
        f'x2="{axis_top[0]:.2f}" y2="{axis_top[1]:.2f}"/>',
    ]

    centroid = project(0.0, 0.0)
    for name, (px, py) in vertex_px.items():
        # Nudge each label outward from the centroid so it clears the frame.
        dx, dy = px - centroid[0], py - centroid[1]
        norm = math.hypot(dx, dy) or 1.0
        lx, ly = px + 18.0 * dx / norm, py + 18.0 * dy / norm
        lines.append(
            f'<text class="vertex-label" x="{lx:.2f}" y="{ly:.2f}" '
            f'dominant-baseline="middle">{name}</text>'
        )

    max_count = max((b.count for b in bins), default=0)
    for b in sorted(bins, key=lambda b: (-b.count, b.bx, b.by)):
        px, py = project(b.bx, b.by)
        r = _radius(b.count, max_count, options)
        css = f"bin bin-{b.label}" if b.label is not None else "bin bin-unlabeled"
        lines.append(
            f'<circle class="{css}" cx="{px:.2f}" cy="{py:.2f}" r="{r:.2f}">'
            f"<title>{b.count}</title></circle>"
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"

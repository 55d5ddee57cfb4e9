"""
Rendering the triangle as SVG
=============================

Classified articles become points, points collapse into grid bins, and the
bins are drawn as circles with logarithmic radii. The axis from the basic
edge to the human vertex is the translational direction.
"""

import math
import random
from pathlib import Path

from translag import PlotOptions, bin_points, render_svg, triangle_coords

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

rng = random.Random(7)

# synthesize 4,000 articles drifting from the basic edge toward the clinic
points = []
for pmid in range(1, 4001):
    n_a = rng.randint(0, 6)
    n_c = rng.randint(0, 6)
    n_h = rng.randint(0, 10)
    if n_a + n_c + n_h == 0:
        continue
    label = "".join(tag for tag, n in (("A", n_a), ("C", n_c), ("H", n_h)) if n)
    x, y = triangle_coords(n_a, n_c, n_h)
    points.append((x, y, pmid, label))

bins = bin_points(points, resolution=40)
largest = max(bins, key=lambda b: b.count)
print(f"{len(points)} points -> {len(bins)} occupied bins")
print(f"densest bin: ({largest.bx:+.2f}, {largest.by:+.2f}) "
      f"count={largest.count} label={largest.label}")

svg = render_svg(bins, PlotOptions(width=640, height=560, r_min=1.0, r_max=12.0))
target = OUT / "triangle.svg"
target.write_text(svg, encoding="utf-8")
print(f"wrote {target} ({len(svg)} bytes, {svg.count('<circle')} circles)")

# sanity: every bin center stays inside the frame
assert all(math.hypot(b.bx, b.by) <= 1.0 + 1e-9 for b in bins)

#!/usr/bin/env python3
"""Generate crates/core/data/gasket.json: a four-cylinder head gasket with an
outer chamfered outline and 50 circular holes.

Run from the repository root. The script checks that holes are pairwise
disjoint, lie inside the outline with clearance, and stay clear of the
evaluation point (0.240999, 0.3).
"""

import json
import math
import pathlib

TEMPS = {"coolant": 90.0, "oil_return": 110.0, "outer": 120.0, "oil": 130.0, "bore": 160.0}
Z_STAR = (0.240999, 0.3)
MIN_CLEARANCE = 0.02

HALF_X, HALF_Y, CHAMFER = 0.98, 0.44, 0.08
outline = [
    (-HALF_X + CHAMFER, -HALF_Y), (HALF_X - CHAMFER, -HALF_Y), (HALF_X, -HALF_Y + CHAMFER),
    (HALF_X, HALF_Y - CHAMFER), (HALF_X - CHAMFER, HALF_Y), (-HALF_X + CHAMFER, HALF_Y),
    (-HALF_X, HALF_Y - CHAMFER), (-HALF_X, -HALF_Y + CHAMFER),
]

BORE_R, PITCH, THIRD_BORE_X = 0.205, 0.465, 0.241
bores = [THIRD_BORE_X + PITCH * (j - 2) for j in range(4)]
gaps = [(a + b) / 2 for a, b in zip(bores, bores[1:])]

holes = []  # (label, x, y, r)
holes += [("bore", x, 0.0, BORE_R) for x in bores]
# Coolant passages flanking each bore, above and below.
for x in bores:
    for dx in (-0.12, 0.12):
        for y in (-0.35, 0.35):
            holes.append(("coolant", x + dx, y, 0.028))
# Coolant passages between bores.
for x in gaps:
    for y in (-0.35, 0.35):
        holes.append(("coolant", x, y, 0.028))
# Coolant passages below every bore center.
for x in bores:
    holes.append(("coolant", x, -0.35, 0.028))
# Oil return and oil feed between bores.
for x in gaps:
    for y in (-0.24, 0.24):
        holes.append(("oil_return", x, y, 0.03))
    for y in (-0.16, 0.16):
        holes.append(("oil", x, y, 0.018))
# End holes.
for x in (-0.91, 0.91):
    for y in (-0.32, 0.32):
        holes.append(("oil_return", x, y, 0.025))
    for y in (-0.22, 0.22):
        holes.append(("oil", x, y, 0.015))

assert len(holes) == 50, len(holes)


def seg_dist(p, a, b):
    ax, ay = a
    bx, by = b
    px, py = p
    ex, ey = bx - ax, by - ay
    t = max(0.0, min(1.0, ((px - ax) * ex + (py - ay) * ey) / (ex * ex + ey * ey)))
    return math.hypot(px - ax - t * ex, py - ay - t * ey)


def outline_dist(p):
    n = len(outline)
    return min(seg_dist(p, outline[i], outline[(i + 1) % n]) for i in range(n))


def inside_outline(p):
    x, y = p
    return abs(x) < HALF_X and abs(y) < HALF_Y and abs(x) + abs(y) < HALF_X + HALF_Y - CHAMFER


for i, (la, xa, ya, ra) in enumerate(holes):
    assert inside_outline((xa, ya))
    assert outline_dist((xa, ya)) - ra >= MIN_CLEARANCE, (la, xa, ya)
    for lb, xb, yb, rb in holes[i + 1:]:
        gap = math.hypot(xa - xb, ya - yb) - ra - rb
        assert gap >= MIN_CLEARANCE, (la, xa, ya, lb, xb, yb, gap)

dists = sorted(
    [(math.hypot(Z_STAR[0] - x, Z_STAR[1] - y) - r, l) for l, x, y, r in holes]
    + [(outline_dist(Z_STAR), "outer")]
)
assert dists[0][0] > 0.05
print("nearest curves to z*:", [(round(d, 4), l) for d, l in dists[:5]])

scene = {
    "name": "gasket",
    "dimension": 2,
    "bbox": {"lo": [-1.0, -0.5], "hi": [1.0, 0.5]},
    "primitives": [{"kind": "polyline", "params": {"points": [list(p) for p in outline], "closed": True},
                    "label": "outer"}]
    + [{"kind": "circle", "params": {"center": [round(x, 6), round(y, 6)], "radius": r}, "label": l}
       for l, x, y, r in holes],
    "boundary_values": TEMPS,
    "source": {"kind": "none"},
    "evaluation_point": list(Z_STAR),
    "epsilon": 1e-3,
}
out = pathlib.Path("crates/core/data/gasket.json")
out.write_text(json.dumps(scene, indent=1) + "\n")
print("wrote", out, "with", len(holes), "holes")

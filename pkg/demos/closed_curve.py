"""Design-space view: a smooth closed curve from a control polygon.

Rational cubic weights with quadratic interpolatory locals give
projectors that simply gather each vertex one-ring, so the curve is a
direct blend of local parabolas through the control points.
"""

import json
import math

import numpy as np

from chartsplines import (
    ClosedPolygon,
    ControlPolygon,
    LagrangeBasis,
    ManifoldConfig,
    RationalCubic,
    curve_eval,
    design_projector,
    shape_functions,
)


def main():
    m = 12
    config = ManifoldConfig(ClosedPolygon(m), RationalCubic(),
                            LagrangeBasis(2))
    angles = 2 * math.pi * np.arange(m) / m
    verts = np.column_stack([np.cos(angles), np.sin(angles),
                             np.zeros(m)])
    # perturb one vertex so the curve is visibly not a circle
    verts[3] *= 1.6
    polygon = ControlPolygon(verts, closed=True)

    p = design_projector(config, polygon, 5)
    print("projector of chart 5 (rows: ring vertices 4, 5, 6):")
    for row in p:
        print("  " + " ".join(f"{v:4.1f}" for v in row))

    print("\ncurve samples (s, eta, x, y):")
    for s in range(0, m, 3):
        for eta in (0.0, 0.5):
            x, y, _ = curve_eval(config, polygon, eta, s)
            print(f"  {s:2d}  {eta:.1f}  {x:8.4f}  {y:8.4f}")

    start = curve_eval(config, polygon, 0.0, 0)
    wrap = curve_eval(config, polygon, 1.0, m - 1)
    print(f"\nclosure gap: {np.abs(start - wrap).max():.2e}")

    row = shape_functions(config, polygon, 0.5, 3)
    print(f"shape function row sum at (3, 0.5): {row.sum():.15f}")

    blob = json.dumps({"closed": True, "vertices": verts.tolist()})
    again = ControlPolygon.from_json(blob)
    print(f"round trip through JSON keeps {again.count} vertices")


if __name__ == "__main__":
    main()

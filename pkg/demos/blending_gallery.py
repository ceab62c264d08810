"""Tour of the five blending-weight families.

For each family we print the landmark weight values on a mid-domain
chart, the knots the weight introduces inside one element, and a
partition-of-unity check over the whole interval.
"""

import numpy as np

from chartsplines import (
    BezierBasis,
    Hat,
    ManifoldConfig,
    MaskedCubic,
    OpenInterval,
    RationalCubic,
    SmoothBSpline,
    blending_eval,
)
from chartsplines.blending import breakpoints, weight_ders


def main():
    domain = OpenInterval(8)
    families = [Hat(), SmoothBSpline(3), RationalCubic(),
                MaskedCubic(3), MaskedCubic(4)]
    xs = np.linspace(0.0, domain.length, 801)
    for family in families:
        config = ManifoldConfig(domain, family, BezierBasis(3))
        chart = config.charts[4]

        total = np.zeros_like(xs)
        for c in config.charts:
            total += weight_ders(family, c, xs, 0, domain)[0]
        dev = np.abs(total - 1.0).max()

        probes = [4.0, 4.25, 4.5, 4.75]
        vals = [blending_eval(config, 4, x) for x in probes]
        pts = set()
        for i in range(len(config.charts)):
            pts.update(float(t) for t in breakpoints(config, i).absolute())
        knots = sorted(p for p in pts
                       if 4.0 < p < 5.0 and abs(p - round(p)) > 1e-12)

        print(f"{family.name}")
        print(f"  weight at x = 4, 4.25, 4.5, 4.75:"
              f" {', '.join(f'{v:.6f}' for v in vals)}")
        print(f"  extra knots in (4, 5): {knots if knots else 'none'}")
        print(f"  max |sum - 1| over [0, 8]: {dev:.2e}")
        print()


if __name__ == "__main__":
    main()

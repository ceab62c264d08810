"""Which spline spaces do the blended constructions span?

Hat weights with degree q_p Bernstein locals reproduce the C^0 splines
of degree q_p + 1. Cubic spline weights with cubic locals reproduce the
C^2 sextics. The one-ring families reproduce cubic polynomials but not
a full spline space; the residual against C^2 cubics is printed last
to make that visible.
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
    l2_fit,
    make_space,
    polynomial_target,
    reproduction_residual,
)

N = 5
TOP = float(N + 1)


def main():
    rows = [
        ("hat + quadratic locals", Hat(), 2, make_space(3, 0, (0, TOP), N)),
        ("hat + cubic locals", Hat(), 3, make_space(4, 0, (0, TOP), N)),
        ("cubic spline weights", SmoothBSpline(3), 3,
         make_space(6, 2, (0, TOP), N)),
    ]
    for label, family, qp, space in rows:
        config = ManifoldConfig(OpenInterval(N), family, BezierBasis(qp))
        resid = reproduction_residual(config, space)
        print(f"{label:24s} -> S^({space.degree},{space.smoothness}): "
              f"residual {resid:.2e}")

    print()
    for family in (RationalCubic(), MaskedCubic(3), MaskedCubic(4)):
        config = ManifoldConfig(OpenInterval(N), family, BezierBasis(3),
                                interval=(0.0, 1.0))
        cubic = l2_fit(config, polynomial_target(3)).l2_error
        resid = reproduction_residual(config, make_space(3, 2, (0, 1), N))
        print(f"{family.name:24s} cubic polynomial fit {cubic:.2e}, "
              f"C2 cubic spline residual {resid:.2e}")


if __name__ == "__main__":
    main()

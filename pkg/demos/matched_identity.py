"""Split-patch locals that cancel the blending exactly.

With the precomputed matching coefficients, the blended sum collapses
to the classic open-knot C^2 cubic B-spline basis, and the identity is
independent of which one-ring blending family is used.
"""

import numpy as np

from chartsplines import (
    Hat,
    ManifoldConfig,
    MaskedCubic,
    MatchedBasis,
    OpenInterval,
    PiecewiseBezierBasis,
    RationalCubic,
    basis_matrix,
    make_space,
)


def main():
    n = 6
    space = make_space(3, 2, (0.0, n + 1.0), n)
    xs = np.linspace(0.0, n + 1.0, 1401)
    ref = basis_matrix(space, xs, 0)
    print(f"open-knot cubic space: dim {space.dim}")
    for family in (Hat(), RationalCubic(), MaskedCubic(3)):
        mb = MatchedBasis(ManifoldConfig(OpenInterval(n), family,
                                         PiecewiseBezierBasis(3)))
        for d in (0, 1, 2):
            gap = np.abs(mb.matrix(xs, d) - basis_matrix(space, xs, d)).max()
            print(f"  {family.name:10s} d = {d}: max gap {gap:.2e}")
    print("\nall gaps are round-off; the construction is exact")


if __name__ == "__main__":
    main()

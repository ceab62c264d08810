"""Sample the blended global products w_i * p_ij across an interval.

Shows the sparse evaluator output at a single point, the number of
active products as the point moves through an element, and agreement
between the sparse and dense evaluation paths.
"""

import numpy as np

from chartsplines import (
    BezierBasis,
    GlobalBasisHandle,
    ManifoldConfig,
    OpenInterval,
    RationalCubic,
    dense_matrix,
    global_basis_eval,
)


def main():
    config = ManifoldConfig(OpenInterval(5), RationalCubic(), BezierBasis(3))
    handle = GlobalBasisHandle(config)
    print(f"charts: {len(config.charts)}, products: {handle.count}")

    x = 2.4
    entries = global_basis_eval(handle, x, 0)
    print(f"\nactive products at x = {x}:")
    for g, v in entries:
        chart, local = handle.split(g)
        print(f"  global {g:2d} = chart {chart}, local {local}: {v:.6f}")
    print(f"sum = {sum(v for _, v in entries):.15f}")

    print("\nactive count along one element:")
    for x in [2.0, 2.1, 2.5, 2.9, 3.0]:
        k = len(global_basis_eval(handle, x, 0))
        print(f"  x = {x}: {k}")

    # the dense table is just the sparse entries scattered into rows
    xs = np.linspace(0.0, 5.0, 101)
    table = dense_matrix(handle, xs, 0)
    worst = 0.0
    for r, x in enumerate(xs):
        row = np.zeros(handle.count)
        for g, v in global_basis_eval(handle, float(x), 0):
            row[g] = v
        worst = max(worst, np.abs(row - table[r]).max())
    print(f"\nsparse vs dense over 101 points: max gap {worst:.2e}")
    print(f"row sums in [{table.sum(axis=1).min():.12f},"
          f" {table.sum(axis=1).max():.12f}]")


if __name__ == "__main__":
    main()

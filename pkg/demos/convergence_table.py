"""Least-squares convergence of each construction on sin(pi x).

Each level halves the element size. Cubic-capable constructions reach
fourth order, hat with quartic locals reaches fifth, and the plain C^2
cubic spline fit is printed alongside as the baseline every blended
construction should beat.
"""

from chartsplines import (
    BezierBasis,
    Hat,
    ManifoldConfig,
    MaskedCubic,
    OpenInterval,
    RationalCubic,
    convergence_study,
    make_space,
    sin_target,
    spline_fit_error,
)

LEVELS = [1, 2, 3, 4]


def builder(make_family, qp):
    def make(n_inner):
        return ManifoldConfig(OpenInterval(n_inner), make_family(),
                              BezierBasis(qp), interval=(0.0, 1.0))

    return make


def main():
    cases = [
        ("hat, quadratic locals", builder(Hat, 2)),
        ("hat, cubic locals", builder(Hat, 3)),
        ("rational", builder(RationalCubic, 3)),
        ("masked, scale 3", builder(lambda: MaskedCubic(3), 3)),
        ("masked, scale 4", builder(lambda: MaskedCubic(4), 3)),
    ]
    for label, make in cases:
        table = convergence_study(make, LEVELS, sin_target)
        print(label)
        for level, h, err, rate in table.rows:
            tail = "" if rate is None else f"  rate {rate:.3f}"
            print(f"  level {level}: h = {h:.5f}  error {err:.3e}{tail}")
        print(f"  final rate: {table.final_rate:.3f}\n")

    print("plain C2 cubic spline fit at the same levels:")
    for level in LEVELS:
        n_el = 2 ** (level + 2)
        err = spline_fit_error(make_space(3, 2, (0.0, 1.0), n_el - 1),
                               sin_target)
        print(f"  level {level}: error {err:.3e}")


if __name__ == "__main__":
    main()

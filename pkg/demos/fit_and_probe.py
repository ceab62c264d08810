"""Fit a target function, then interrogate the result.

Runs the least-squares projector for a masked construction, evaluates
the fit and its derivatives, and probes the measured smoothness order
and per-element breaking points that the extra knots introduce.
"""

import numpy as np

from chartsplines import (
    BezierBasis,
    ManifoldConfig,
    MaskedCubic,
    OpenInterval,
    breakpoints_per_element,
    evaluate_fit,
    l2_fit,
    measure_smoothness_order,
)


def main():
    config = ManifoldConfig(OpenInterval(9), MaskedCubic(4), BezierBasis(3),
                            interval=(0.0, 1.0))

    def target(x):
        x = np.asarray(x, float)
        return np.exp(-3.0 * x) * np.sin(4.0 * x)

    report = l2_fit(config, target)
    print(f"products: {report.coefficients.size}, "
          f"L2 error {report.l2_error:.3e}")

    xs = np.linspace(0.0, 1.0, 7)
    vals = evaluate_fit(config, report, xs)
    print("\n  x      fit        target")
    for x, v in zip(xs, vals):
        print(f"  {x:.3f}  {v: .6f}  {target(x): .6f}")

    inner = np.linspace(0.07, 0.93, 7)
    d1 = evaluate_fit(config, report, inner, 1)
    h = 1e-6
    fd = (evaluate_fit(config, report, inner + h)
          - evaluate_fit(config, report, inner - h)) / (2 * h)
    print(f"\nderivative vs finite differences: {np.abs(d1 - fd).max():.2e}")

    print(f"breaking points per element: {breakpoints_per_element(config)}")
    print(f"measured smoothness order: C{measure_smoothness_order(config)}")


if __name__ == "__main__":
    main()

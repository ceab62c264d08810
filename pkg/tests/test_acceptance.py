"""End-to-end acceptance checks for the blended-chart spline toolkit.

Each test pins one headline property of the construction family with an
explicit tolerance; together they are the release gate for the package.
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from chartsplines import (
    BezierBasis,
    ClosedPolygon,
    ControlPolygon,
    GlobalBasisHandle,
    Hat,
    LagrangeBasis,
    ManifoldConfig,
    MaskedCubic,
    MatchedBasis,
    OpenInterval,
    PiecewiseBezierBasis,
    RationalCubic,
    SmoothBSpline,
    basis_matrix,
    breakpoints_per_element,
    convergence_study,
    curve_eval,
    dense_matrix,
    design_projector,
    global_basis_eval,
    l2_fit,
    make_space,
    measure_smoothness_order,
    polynomial_target,
    reproduction_residual,
    shape_functions,
    sin_target,
    span_rank,
    spline_fit_error,
)
from chartsplines.blending import weight_ders

FAMILIES = {
    "hat": Hat,
    "smooth": lambda: SmoothBSpline(3),
    "rational": RationalCubic,
    "masked3": lambda: MaskedCubic(3),
    "masked4": lambda: MaskedCubic(4),
}


def weight_sum(family, domain, xs):
    cfg = ManifoldConfig(domain, family, BezierBasis(3))
    total = np.zeros_like(xs)
    for chart in cfg.charts:
        total += weight_ders(family, chart, xs, 0, domain)[0]
    return total


def test_criterion_01_partition_of_unity():
    """All five blending families sum to one on an interval and a 12-gon."""
    for name, make in FAMILIES.items():
        family = make()
        interval = OpenInterval(8)
        xs = np.linspace(0.0, interval.length, 1000)
        dev = np.abs(weight_sum(family, interval, xs) - 1.0).max()
        assert dev < 1e-12, f"{name} interval PoU deviation {dev}"
        polygon = ClosedPolygon(12)
        xs = np.linspace(0.0, 12.0, 1000)
        dev = np.abs(weight_sum(family, polygon, xs) - 1.0).max()
        assert dev < 1e-12, f"{name} polygon PoU deviation {dev}"
    print("PASS 1: partition of unity for all five families")


def test_criterion_02_hat_reproduces_c0_splines():
    """Hat blending with Bernstein locals spans the C^0 splines of
    one degree higher."""
    n = 5
    for qp in (2, 3):
        cfg = ManifoldConfig(OpenInterval(n), Hat(), BezierBasis(qp))
        ref = make_space(qp + 1, 0, (0.0, 6.0), n)
        resid = reproduction_residual(cfg, ref)
        assert resid < 1e-10, f"qp={qp} residual {resid}"
    print("PASS 2: hat constructions reproduce C0 spline spaces")


def test_criterion_03_smooth_reproduction_and_rank():
    """Cubic-weight blending spans the C^2 sextics; its span rank obeys
    7 + 4n while the raw function count is 4(n + 4)."""
    cfg = ManifoldConfig(OpenInterval(5), SmoothBSpline(3), BezierBasis(3))
    resid = reproduction_residual(cfg, make_space(6, 2, (0.0, 6.0), 5))
    assert resid < 1e-9, f"residual {resid}"
    for n in (3, 5, 8):
        cfg = ManifoldConfig(OpenInterval(n), SmoothBSpline(3), BezierBasis(3))
        count, rank = span_rank(cfg)
        assert count == 4 * (n + 4)
        assert rank == 7 + 4 * n
    print("PASS 3: smooth construction reproduces C2 sextics, rank 7+4n")


def test_criterion_04_matched_identity():
    """The matched construction coincides with the open-knot C^2 cubic
    basis pointwise, whatever one-ring blending is used."""
    n = 6
    space = make_space(3, 2, (0.0, 7.0), n)
    xs = np.linspace(0.0, 7.0, 200 * 7 + 1)
    ref = basis_matrix(space, xs, 0)
    for family in (Hat(), MaskedCubic(3), RationalCubic()):
        mb = MatchedBasis(ManifoldConfig(OpenInterval(n), family,
                                         PiecewiseBezierBasis(3)))
        err = np.abs(mb.matrix(xs) - ref).max()
        assert err < 1e-12, f"{family.name} identity error {err}"
    print("PASS 4: matched basis equals the cubic B-spline basis")


def test_criterion_05_breakpoints_and_continuity():
    """Construction knots per element and measured continuity orders."""
    expected = {"hat": 0, "smooth": 0, "rational": 1, "masked3": 2,
                "masked4": 3}
    orders = {"hat": 0, "rational": 2, "masked3": 2, "masked4": 2}
    for name, make in FAMILIES.items():
        cfg = ManifoldConfig(OpenInterval(5), make(), BezierBasis(3))
        assert breakpoints_per_element(cfg) == expected[name], name
        if name in orders:
            assert measure_smoothness_order(cfg, tol=1e-8) == orders[name], name
    print("PASS 5: breaking points {0,0,1,2,3} and continuity C0/C2")


def ladder(name, qp):
    def make(n_inner):
        domain = OpenInterval(n_inner)
        return ManifoldConfig(domain, FAMILIES[name](), BezierBasis(qp),
                              interval=(0.0, 1.0))

    return make


LEVELS = [1, 2, 3, 4]


def run_ladders():
    cases = {
        ("hat", 2): None,
        ("hat", 3): None,
        ("smooth", 3): None,
        ("rational", 3): None,
        ("masked3", 3): None,
        ("masked4", 3): None,
    }
    return {key: convergence_study(ladder(*key), LEVELS, sin_target)
            for key in cases}


@pytest.fixture(scope="module")
def ladders():
    return run_ladders()


def test_criterion_06_convergence_rates(ladders):
    """Dyadic refinement of the sine fit reaches fourth order for the
    cubic-capable constructions and fifth order for hat with quartics."""
    for key, minimum in [(("hat", 2), 3.7), (("rational", 3), 3.7),
                         (("masked3", 3), 3.7), (("masked4", 3), 3.7)]:
        rate = ladders[key].final_rate
        assert rate >= minimum, f"{key} final rate {rate}"
    rate = ladders[("hat", 3)].final_rate
    assert rate >= 4.7, f"hat qp=3 final rate {rate}"
    print("PASS 6: convergence rates >= 3.7 (and >= 4.7 for hat qp=3)")


def test_criterion_07_plain_cubics_trail_every_construction(ladders):
    """The plain C^2 cubic fit is the least accurate at every level."""
    plain = [spline_fit_error(make_space(3, 2, (0.0, 1.0), 2 ** (l + 2) - 1),
                              sin_target)
             for l in LEVELS]
    for key, table in ladders.items():
        if key[1] != 3:
            continue
        for (level, _, err, _), reference in zip(table.rows, plain):
            assert reference > err, (
                f"plain cubics beat {key} at level {level}: "
                f"{reference} <= {err}")
    print("PASS 7: plain cubic errors exceed all qp=3 constructions")


def test_criterion_08_cubic_polynomial_reproduction():
    """One-ring rational and masked constructions fit cubics exactly."""
    targets = [polynomial_target(3),
               lambda x: (np.asarray(x, float) - 0.37) ** 3 - 2.0]
    for make in (RationalCubic, lambda: MaskedCubic(3), lambda: MaskedCubic(4)):
        cfg = ManifoldConfig(OpenInterval(5), make(), BezierBasis(3),
                             interval=(0.0, 1.0))
        for target in targets:
            err = l2_fit(cfg, target).l2_error
            assert err < 1e-10, f"{cfg.family.name} cubic fit error {err}"
    print("PASS 8: rational and masked families reproduce cubics")


def test_criterion_09_design_space_properties():
    """Rational weights with quadratic interpolatory locals: identity
    projectors, constant and linear precision, affine-invariant curves."""
    m = 12
    cfg = ManifoldConfig(ClosedPolygon(m), RationalCubic(), LagrangeBasis(2))
    params = ControlPolygon(np.arange(m, dtype=float), closed=True)
    for i in range(m):
        p = design_projector(cfg, params, i)
        ring = [(i - 1) % m, i, (i + 1) % m]
        expect = np.zeros((3, m))
        for r, v in enumerate(ring):
            expect[r, v] = 1.0
        assert_allclose(p, expect, atol=1e-12, err_msg=f"chart {i}")

    ones = ControlPolygon(np.full(m, 4.25), closed=True)
    for s in range(m):
        for eta in (0.0, 0.31, 0.77, 1.0):
            row = shape_functions(cfg, ones, eta, s)
            assert abs(row.sum() - 1.0) < 1e-12
            assert abs(row @ ones.vertices - 4.25) < 1e-12
    # linear precision, measured away from the periodic seam
    for s in (3, 6, 8):
        for eta in (0.2, 0.5, 0.9):
            row = shape_functions(cfg, params, eta, s)
            assert abs(row @ params.vertices - (s + eta)) < 1e-12

    rng = np.random.default_rng(29)
    verts = rng.standard_normal((m, 3))
    amat = rng.standard_normal((3, 3))
    shift = rng.standard_normal(3)
    poly = ControlPolygon(verts, closed=True)
    mapped = ControlPolygon(verts @ amat.T + shift, closed=True)
    for s, eta in [(0, 0.25), (5, 0.5), (11, 0.95)]:
        p = curve_eval(cfg, poly, eta, s)
        q = curve_eval(cfg, mapped, eta, s)
        assert_allclose(q, amat @ p + shift, atol=1e-12)
    print("PASS 9: identity projectors, constant/linear precision, "
          "affine invariance")


def test_criterion_10_derivatives_match_finite_differences():
    """Analytic first derivatives of every global product agree with
    central differences of the values."""
    n = 8
    rng = np.random.default_rng(101)
    h = 1e-6
    for name, make in FAMILIES.items():
        cfg = ManifoldConfig(OpenInterval(n), make(), BezierBasis(3))
        handle = GlobalBasisHandle(cfg)
        pool = rng.uniform(0.01, 8.99, size=1200)
        # stay off the twelfth-step grid holding every construction knot
        pool = pool[np.abs(pool * 12 - np.round(pool * 12)) > 2e-3]
        xs = pool[:500]
        assert xs.size == 500
        d1 = dense_matrix(handle, xs, 1)
        up = dense_matrix(handle, xs + h, 0)
        dn = dense_matrix(handle, xs - h, 0)
        fd = (up - dn) / (2 * h)
        # relative error with a unit floor so dormant entries compare
        # absolutely
        rel = np.abs(d1 - fd) / np.maximum(np.abs(d1), 1.0)
        assert rel.max() < 1e-5, f"{name} derivative mismatch {rel.max()}"
        # spot-check the sparse evaluator against the dense table
        for x in xs[::100]:
            row = np.zeros(handle.count)
            for g, v in global_basis_eval(handle, float(x), 1):
                row[g] = v
            assert_allclose(row, d1[list(xs).index(x)], atol=1e-12)
    print("PASS 10: analytic derivatives match finite differences")

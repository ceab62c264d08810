"""Command-line front end.

Subcommands: ``basis`` samples every global function, ``convergence``
runs the dyadic fitting study, ``check`` measures one construction's
properties into JSON, ``curve`` evaluates a control-polygon curve.
Exit codes: 0 success, 2 usage or configuration error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import ConfigError, DomainError, NumericalError
from .spline_core import make_space
from .blending import Hat, MaskedCubic, RationalCubic, SmoothBSpline
from .local_basis import BezierBasis, LagrangeBasis, PiecewiseBezierBasis
from .atlas import (ClosedPolygon, ControlPolygon, GlobalBasisHandle,
                    ManifoldConfig, MatchedBasis, OpenInterval, curve_eval,
                    dense_matrix)
from . import fitting

__all__ = ["main", "build_parser"]

CONSTRUCTIONS = ("hat", "smooth", "rational", "masked3", "masked4", "matched")


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


def _family(args):
    name = args.construction
    if name == "hat":
        return Hat()
    if name == "smooth":
        return SmoothBSpline(args.qw, args.boundary)
    if name == "rational":
        return RationalCubic()
    if name == "masked3":
        return MaskedCubic(3)
    if name == "masked4":
        return MaskedCubic(4)
    raise ConfigError(f"construction {name!r} has no blending family")


def _interval_object(args):
    """Config (or matched basis) on the node-coordinate interval."""
    if args.n < 1:
        raise ConfigError("--n must be at least 1 (one inner node)")
    if args.qp < 0:
        raise ConfigError("--qp must be nonnegative")
    domain = OpenInterval(args.n)
    if args.construction == "matched":
        if args.qp != 3:
            raise ConfigError("the matched construction requires --qp 3")
        # identical for every one-ring partition of unity, so fix one
        return MatchedBasis(
            ManifoldConfig(domain, Hat(), PiecewiseBezierBasis(3)))
    return ManifoldConfig(domain, _family(args), BezierBasis(args.qp))


def _parse_target(spec: str):
    if spec == "sin":
        return fitting.sin_target
    if spec.startswith("poly:"):
        try:
            degree = int(spec[5:])
        except ValueError:
            raise ConfigError(f"bad polynomial target {spec!r}; "
                              "use poly:<degree>")
        return fitting.polynomial_target(degree)
    raise ConfigError(f"unknown target {spec!r}; use sin or poly:<degree>")


def _parse_levels(spec: str):
    try:
        levels = [int(tok) for tok in spec.split(",")]
    except ValueError:
        raise ConfigError(f"bad level list {spec!r}; use e.g. 1,2,3,4")
    if not levels or any(l < 1 for l in levels):
        raise ConfigError("levels must be positive integers")
    return levels


def _emit(lines, out):
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_basis(args) -> int:
    obj = _interval_object(args)
    if args.samples < 1:
        raise ConfigError("--samples must be at least 1")
    if isinstance(obj, MatchedBasis):
        tab, n_el = obj.matrix, obj.config.domain.n_elements
    else:
        handle = GlobalBasisHandle(obj)
        tab, n_el = (lambda x: dense_matrix(handle, x)), obj.domain.n_elements
    xs = np.linspace(0.0, float(n_el), args.samples * n_el + 1)
    table = tab(xs)
    lines = ["xi,index,value"]
    for xi, row in zip(xs, table):
        lines.extend(f"{_fmt(xi)},{j},{_fmt(v)}" for j, v in enumerate(row))
    _emit(lines, args.out)
    return 0


def cmd_convergence(args) -> int:
    target = _parse_target(args.target)
    levels = _parse_levels(args.levels)
    base = args

    def builder(n):
        domain = OpenInterval(n)
        if base.construction == "matched":
            if base.qp != 3:
                raise ConfigError("the matched construction requires --qp 3")
            return MatchedBasis(ManifoldConfig(
                domain, Hat(), PiecewiseBezierBasis(3), interval=(0.0, 1.0)))
        return ManifoldConfig(domain, _family(base), BezierBasis(base.qp),
                              interval=(0.0, 1.0))

    table = fitting.convergence_study(builder, levels, target,
                                      n_q=args.quad_points)
    lines = ["level,h,error,rate"]
    for level, h, err, rate in table.rows:
        tail = "" if rate is None else _fmt(rate)
        lines.append(f"{level},{_fmt(h)},{_fmt(err)},{tail}")
    _emit(lines, args.out)
    summary = f"final rate: {table.final_rate:.3f}"
    if args.out:
        print(summary)
    else:
        sys.stdout.write(summary + "\n")
    return 0


def _reference_space(args, obj):
    """Candidate spline space for the reproduction cell of the report."""
    if isinstance(obj, MatchedBasis):
        return obj.space
    dom = obj.domain
    top = dom.length
    if args.construction == "hat":
        return make_space(args.qp + 1, 0, (0.0, top), dom.n_inner)
    if args.construction == "smooth":
        return make_space(args.qw + args.qp, args.qw - 1, (0.0, top),
                          dom.n_inner)
    # one-ring cubic families measure against the uniform cubic C^2 space
    return make_space(3, 2, (0.0, top), dom.n_inner)


def cmd_check(args) -> int:
    obj = _interval_object(args)
    config = obj.config if isinstance(obj, MatchedBasis) else obj
    n_el = config.domain.n_elements
    xs = np.linspace(0.0, float(n_el), 1000)
    if isinstance(obj, MatchedBasis):
        table = obj.matrix(xs)
    else:
        table = dense_matrix(GlobalBasisHandle(obj), xs)
    pou = float(np.abs(table.sum(axis=1) - 1.0).max())

    reference = _reference_space(args, obj)
    if isinstance(obj, MatchedBasis):
        # the matched claim is pointwise identity, not just span containment
        from .spline_core import basis_matrix
        fine = np.linspace(0.0, float(n_el), 200 * n_el + 1)
        residual = float(np.abs(obj.matrix(fine)
                                - basis_matrix(reference, fine, 0)).max())
        reproducing = residual < 1e-12
    else:
        residual = fitting.reproduction_residual(obj, reference,
                                                 n_q=args.quad_points)
        reproducing = residual < 1e-9

    count, rank = fitting.span_rank(obj, n_q=args.quad_points)
    report = {
        "partition_of_unity": pou,
        "smoothness_order": fitting.measure_smoothness_order(obj),
        "breaking_points_per_element": fitting.breakpoints_per_element(obj),
        "bspline_reproducing": bool(reproducing),
        "bspline_residual": residual,
        "span_rank": {"count": count, "rank": rank},
    }
    text = json.dumps(report, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return 0


def cmd_curve(args) -> int:
    if args.construction == "matched":
        raise ConfigError("the matched construction has no curve mode; "
                          "it lives on the open interval")
    if args.samples < 2:
        raise ConfigError("--samples must be at least 2 for curves")
    try:
        with open(args.polygon) as fh:
            polygon = ControlPolygon.from_json(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read polygon file: {exc}")
    if not polygon.closed:
        raise ConfigError("open control polygons are not supported; "
                          'set "closed": true')
    config = ManifoldConfig(ClosedPolygon(polygon.count), _family(args),
                            LagrangeBasis(args.qp))
    etas = np.linspace(0.0, 1.0, args.samples)
    lines = ["s,eta,x,y,z"]
    for s in range(polygon.count):
        for eta in etas:
            p = curve_eval(config, polygon, float(eta), s)
            lines.append(f"{s},{_fmt(eta)},{_fmt(p[0])},{_fmt(p[1])},"
                         f"{_fmt(p[2])}")
    _emit(lines, args.out)
    return 0


def _add_common(p: argparse.ArgumentParser, qp_default: int = 3) -> None:
    p.add_argument("--construction", required=True, choices=CONSTRUCTIONS,
                   help="which global basis construction to use")
    p.add_argument("--qw", type=int, default=3,
                   help="blending degree for the smooth family (odd, >= 3)")
    p.add_argument("--qp", type=int, default=qp_default,
                   help="local polynomial degree")
    p.add_argument("--boundary", choices=("full", "corrected"),
                   default="full",
                   help="interval boundary mode of the smooth family")
    p.add_argument("--n", type=int, default=8,
                   help="inner mesh nodes of the interval domain")
    p.add_argument("--quad-points", type=int, default=None,
                   help="Gauss points per quadrature cell")
    p.add_argument("--out", default=None, help="output file path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chartsplines",
        description="Blended chart-local spline bases: sampling, fitting, "
                    "measurement, and curve evaluation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis",
                       help="sample every global basis function to CSV")
    _add_common(p)
    p.add_argument("--samples", type=int, default=33,
                   help="sample points per element")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("convergence",
                       help="dyadic-mesh L2 fitting study to CSV")
    _add_common(p)
    p.add_argument("--levels", default="1,2,3,4",
                   help="comma-separated refinement levels")
    p.add_argument("--target", default="sin",
                   help="fit target: sin or poly:<degree>")
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("check",
                       help="measure construction properties into JSON")
    _add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("curve",
                       help="evaluate a closed control-polygon curve to CSV")
    # quadratic local interpolation is the natural curve setup
    _add_common(p, qp_default=2)
    p.add_argument("--polygon", required=True,
                   help="path to a control polygon JSON file")
    p.add_argument("--samples", type=int, default=17,
                   help="sample points per element (endpoints included)")
    p.set_defaults(func=cmd_curve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    return_code = main()
    sys.exit(return_code)

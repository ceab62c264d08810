"""Blending (weight) function families and the per-chart weight tables.

Every family is defined in chart-local coordinates ``u = xi - center`` so
that the weight is symmetric about its chart and supported on the
``R``-ring neighbourhood, ``R`` the family's support radius in elements.
On an open interval the two boundary charts simply truncate the interior
profile to the domain; because no other chart reaches the boundary
element, this truncation coincides with folding the missing weight into
the boundary chart and the partition of unity survives unchanged.

The smooth family on an interval is different: there every weight is one
member of an open-knot spline basis ("full" mode, one chart per basis
function), or, in the experimental "corrected" mode, an interior cardinal
window with the truncated boundary windows summed into a single weight on
each side.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from .errors import ConfigError
from .spline_core import KNOT_SNAP, cardinal_eval, make_space, basis_matrix

__all__ = [
    "Hat",
    "SmoothBSpline",
    "RationalCubic",
    "MaskedCubic",
    "Chart",
    "BreakpointSet",
    "build_charts",
    "blending_eval",
    "breakpoints",
    "overlap_count",
    "effective_side",
]


def _snap(x: np.ndarray) -> np.ndarray:
    xr = np.round(x)
    return np.where(np.abs(x - xr) < KNOT_SNAP, xr, x)


class Hat:
    """Piecewise linear one-ring weight ``1 - |u|``."""

    name = "hat"
    support_radius = 1.0
    overlap = 2
    smoothness = 0

    def local_breakpoints(self):
        return (Fraction(-1), Fraction(0), Fraction(1))

    def ders(self, u: np.ndarray, nd: int, side: str) -> np.ndarray:
        # the hat is the degree-1 centered cardinal
        u = np.atleast_1d(np.asarray(u, dtype=float))
        return np.stack([cardinal_eval(1, u, d, side) for d in range(nd + 1)])


class SmoothBSpline:
    """Cardinal B-spline weight of odd degree ``q_w >= 3``.

    ``boundary`` selects the open-interval treatment: "full" keeps the
    whole open-knot basis (one chart per basis function), "corrected"
    sums the truncated boundary windows into one C^{q_w-1} weight per
    side.  The corrected mode reproduces only a subspace of the splines
    and is experimental.
    """

    name = "smooth"

    def __init__(self, degree: int = 3, boundary: str = "full"):
        if degree < 3 or degree % 2 == 0:
            raise ConfigError("smooth blending degree must be odd and >= 3")
        if boundary not in ("full", "corrected"):
            raise ConfigError(f"unknown boundary mode {boundary!r}")
        self.degree = int(degree)
        self.boundary = boundary
        self.support_radius = (degree + 1) / 2.0
        self.overlap = degree + 1
        self.smoothness = degree - 1

    def local_breakpoints(self):
        r = (self.degree + 1) // 2
        return tuple(Fraction(k) for k in range(-r, r + 1))

    def ders(self, u: np.ndarray, nd: int, side: str) -> np.ndarray:
        u = np.atleast_1d(np.asarray(u, dtype=float))
        return np.stack([cardinal_eval(self.degree, u, d, side)
                         for d in range(nd + 1)])


class RationalCubic:
    """One-ring rational weight: a squeezed cubic window normalised by
    the sum over every other shift, ``B(2u) / (B(2u+2) + B(2u) + B(2u-2))``
    with ``B`` the centered cardinal cubic."""

    name = "rational"
    support_radius = 1.0
    overlap = 2
    smoothness = 2

    def local_breakpoints(self):
        return tuple(Fraction(k, 2) for k in range(-2, 3))

    def ders(self, u: np.ndarray, nd: int, side: str) -> np.ndarray:
        u = np.atleast_1d(np.asarray(u, dtype=float))
        us = _snap(u)
        if side == "left":
            inside = (us > -1.0) & (us <= 1.0)
        else:
            inside = (us >= -1.0) & (us < 1.0)
        out = np.zeros((nd + 1, u.size))
        if not np.any(inside):
            return out
        v = u[inside]
        num = np.stack([cardinal_eval(3, 2.0 * v, d, side) * 2.0 ** d
                        for d in range(nd + 1)])
        den = np.zeros_like(num)
        for off in (-2.0, 0.0, 2.0):
            den += np.stack([cardinal_eval(3, 2.0 * v + off, d, side) * 2.0 ** d
                             for d in range(nd + 1)])
        # denominator stays in [1/3, 2/3] on the support, so the quotient
        # recursion below is well conditioned
        w = np.zeros_like(num)
        w[0] = num[0] / den[0]
        for d in range(1, nd + 1):
            acc = num[d].copy()
            for m in range(d):
                acc -= math.comb(d, m) * w[m] * den[d - m]
            w[d] = acc / den[0]
        out[:, inside] = w
        return out


class MaskedCubic:
    """Weight assembled from a masked row of squeezed cardinal cubics.

    ``scale`` squeezes the cubics to knot spacing ``1/scale``; the mask
    weights consecutive shifts symmetrically about the chart center.
    The shipped masks are ``scale=3`` with mask ``(1, 1, 1)`` and
    ``scale=4`` with mask ``(1/2, 1, 1, 1, 1/2)``; custom masks are
    accepted but only validated numerically by the test-suite style
    partition checks, not symbolically.
    """

    _canonical = {3: (1.0, 1.0, 1.0), 4: (0.5, 1.0, 1.0, 1.0, 0.5)}

    def __init__(self, scale: int = 3, mask=None):
        if mask is None:
            if scale not in self._canonical:
                raise ConfigError(
                    "no canonical mask for scale "
                    f"{scale}; supply one explicitly")
            mask = self._canonical[scale]
        mask = tuple(float(m) for m in mask)
        if scale < 2:
            raise ConfigError("mask scale must be at least 2")
        if len(mask) % 2 == 0:
            raise ConfigError("mask length must be odd (symmetric offsets)")
        self.scale = int(scale)
        self.mask = mask
        self.name = f"masked{scale}"
        half = (len(mask) - 1) // 2
        self.offsets = tuple(range(-half, half + 1))
        self.support_radius = (2.0 + half) / scale
        self.overlap = 2 if self.support_radius <= 1.0 else int(
            math.ceil(2 * self.support_radius))
        self.smoothness = 2

    def local_breakpoints(self):
        m = int(2 * self.scale * self.support_radius) // 2
        return tuple(Fraction(k, self.scale) for k in range(-m, m + 1))

    def ders(self, u: np.ndarray, nd: int, side: str) -> np.ndarray:
        u = np.atleast_1d(np.asarray(u, dtype=float))
        out = np.zeros((nd + 1, u.size))
        for off, m in zip(self.offsets, self.mask):
            out += m * np.stack([
                cardinal_eval(3, self.scale * u - off, d, side)
                * float(self.scale) ** d
                for d in range(nd + 1)])
        return out


@dataclass(frozen=True)
class Chart:
    """One chart of the atlas: where it sits and how its weight is built."""

    index: int
    kind: str                 # "shift" | "periodic" | "spline_weight" | "ghost_sum"
    center: float             # node coordinates
    center_frac: Fraction
    support: tuple            # (a, b) in node coordinates
    payload: object = None


@dataclass(frozen=True)
class BreakpointSet:
    """Chart-local breakpoints as exact rationals, center included."""

    chart_index: int
    center: Fraction
    points: tuple

    def absolute(self):
        return tuple(self.center + t for t in self.points)


def build_charts(family, domain) -> list:
    """Chart table for a family on an interval or closed polygon domain."""
    if domain.kind == "polygon":
        n_c = domain.n_vertices
        if n_c < 2 * family.support_radius + 1:
            raise ConfigError(
                f"polygon needs at least {int(2 * family.support_radius) + 1} "
                f"vertices for this family, got {n_c}")
        return [Chart(i, "periodic", float(i), Fraction(i),
                      (i - family.support_radius, i + family.support_radius))
                for i in range(n_c)]

    n = domain.n_inner
    top = n + 1
    if isinstance(family, SmoothBSpline):
        q = family.degree
        if family.boundary == "full":
            space = make_space(q, q - 1, (0.0, float(top)), n)
            charts = []
            for k in range(space.dim):
                a = float(space.knots[k])
                b = float(space.knots[k + q + 1])
                c = Fraction(int(round(2 * (a + b))), 4)
                charts.append(Chart(k, "spline_weight", (a + b) / 2.0, c,
                                    (a, b), (space, k)))
            return charts
        # corrected mode: interior cardinal windows plus one summed
        # boundary weight per side
        r = (q + 1) // 2
        lo, hi = r, top - r
        if lo > hi + 1:
            raise ConfigError(
                f"corrected boundary mode needs n >= {q - 1} inner nodes")
        charts = []
        left_ghosts = tuple(float(c) for c in range(lo - q, lo))
        charts.append(Chart(0, "ghost_sum", (0.0 + (lo - 1 + r)) / 2.0,
                            Fraction(lo - 1 + r, 2), (0.0, float(lo - 1 + r)),
                            left_ghosts))
        for j, c in enumerate(range(lo, hi + 1)):
            charts.append(Chart(1 + j, "shift", float(c), Fraction(c),
                                (c - r, c + r)))
        right_ghosts = tuple(float(c) for c in range(hi + 1, hi + 1 + q))
        a_r = float(hi + 1 - r)
        charts.append(Chart(len(charts), "ghost_sum", (a_r + top) / 2.0,
                            Fraction(int(round(2 * (a_r + top))), 4),
                            (a_r, float(top)), right_ghosts))
        return charts

    rad = family.support_radius
    charts = []
    for i in range(top + 1):
        a = max(0.0, i - rad)
        b = min(float(top), i + rad)
        charts.append(Chart(i, "shift", float(i), Fraction(i), (a, b)))
    return charts


def chart_u(chart: Chart, x: np.ndarray, domain) -> np.ndarray:
    """Chart-local coordinate, wrapping on closed polygons."""
    if chart.kind == "periodic":
        n_c = domain.n_vertices
        return (x - chart.center + n_c / 2.0) % n_c - n_c / 2.0
    return x - chart.center


def chart_active(chart: Chart, x: float, domain, side: str = "right") -> bool:
    """Whether the chart's weight can be nonzero at ``x`` from ``side``."""
    if chart.kind == "periodic":
        fam_a = -_chart_radius(chart)
        fam_b = +_chart_radius(chart)
        u = float(chart_u(chart, np.asarray([x], dtype=float), domain)[0])
        a, b = fam_a, fam_b
    else:
        a, b = chart.support
        u = x - chart.center
        a, b = a - chart.center, b - chart.center
    us = float(_snap(np.asarray([u]))[0])
    if side == "left":
        return a < us <= b
    return a <= us < b


def _chart_radius(chart: Chart) -> float:
    a, b = chart.support
    return (b - a) / 2.0


def weight_ders(family, chart: Chart, x: np.ndarray, nd: int, domain,
                side: str = "right") -> np.ndarray:
    """Weight of one chart with derivatives, shape ``(nd + 1, len(x))``.

    Coordinates are node coordinates; any physical rescaling is applied
    by the caller.
    """
    x = np.asarray(x, dtype=float)
    if chart.kind in ("shift", "periodic"):
        return family.ders(chart_u(chart, x, domain), nd, side)
    if chart.kind == "spline_weight":
        space, k = chart.payload
        out = np.zeros((nd + 1, x.size))
        for d in range(nd + 1):
            out[d] = basis_matrix(space, x, d, side)[:, k]
        return out
    if chart.kind == "ghost_sum":
        q = family.degree
        out = np.zeros((nd + 1, x.size))
        for c in chart.payload:
            out += np.stack([cardinal_eval(q, x - c, d, side)
                             for d in range(nd + 1)])
        return out
    raise ConfigError(f"unknown chart kind {chart.kind!r}")


def effective_side(domain, x: float, side: str) -> str:
    """One-sided limits at the two interval ends must point inward."""
    if getattr(domain, "kind", None) != "interval":
        return side
    top = domain.n_inner + 1
    if abs(x) < KNOT_SNAP:
        return "right"
    if abs(x - top) < KNOT_SNAP:
        return "left"
    return side


def blending_eval(config, i: int, xi: float, d: int = 0,
                  side: str = "right") -> float:
    """One chart's weight (or derivative) at parameter ``xi``.

    Exactly 0.0 outside the chart's support.  ``xi`` and the derivative
    are in the configuration's public coordinates.
    """
    chart = config.charts[i]
    x = config.to_nodes(xi)
    side = effective_side(config.domain, x, side)
    if not chart_active(chart, x, config.domain, side):
        return 0.0
    w = weight_ders(config.family, chart, np.asarray([x]), d,
                    config.domain, side)
    return float(w[d, 0]) * config.node_scale ** d


def breakpoints(config, i: int) -> BreakpointSet:
    """Exact chart-local breakpoints of chart ``i``."""
    chart = config.charts[i]
    fam = config.family
    if chart.kind in ("shift", "periodic"):
        pts = fam.local_breakpoints()
        if chart.kind == "shift":
            a, b = chart.support
            lo = Fraction(int(round(a))) - chart.center_frac
            hi = Fraction(int(round(b))) - chart.center_frac
            pts = tuple(t for t in pts if lo <= t <= hi)
        return BreakpointSet(i, chart.center_frac, pts)
    # spline-weight and summed boundary charts break at the integer knots
    a, b = chart.support
    pts = tuple(Fraction(k) - chart.center_frac
                for k in range(int(math.ceil(a - 1e-12)),
                               int(math.floor(b + 1e-12)) + 1))
    return BreakpointSet(i, chart.center_frac, pts)


def overlap_count(config, xi: float) -> int:
    """Number of charts whose support interior contains ``xi``."""
    x = config.to_nodes(xi)
    count = 0
    for chart in config.charts:
        if chart.kind == "periodic":
            r = _chart_radius(chart)
            u = float(chart_u(chart, np.asarray([x], dtype=float),
                              config.domain)[0])
            if -r < u < r:
                count += 1
        else:
            a, b = chart.support
            if a < x < b:
                count += 1
    return count

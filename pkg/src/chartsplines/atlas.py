"""Global basis assembly over an atlas of overlapping charts.

A configuration couples a domain (open interval or closed polygon of
unit elements), a blending family, and a polynomial local basis per
chart.  Products of chart weights with the chart-local polynomials form
the analysis basis; gathering mesh vertices through per-chart
least-squares projectors turns the same machinery into a mesh-based
design space with dense element shape functions and control-polygon
curves.

Transition functions between overlapping charts are translations, so
every chart reads one global node coordinate and maps it affinely onto
its reference cell [-1, 1].
"""

from __future__ import annotations

from dataclasses import dataclass
import json
import math

import numpy as np

from .errors import ConfigError, DomainError, NumericalError, RankError
from .spline_core import KNOT_SNAP, basis_matrix, make_space
from .blending import _snap, build_charts, chart_u, effective_side, weight_ders
from .local_basis import BezierBasis, PiecewiseBezierBasis, lobatto_points

__all__ = [
    "OpenInterval",
    "ClosedPolygon",
    "ManifoldConfig",
    "GlobalBasisHandle",
    "ControlPolygon",
    "global_basis_eval",
    "dense_matrix",
    "design_projector",
    "shape_functions",
    "curve_eval",
    "MatchedBasis",
]


@dataclass(frozen=True)
class OpenInterval:
    """Open interval of ``n_inner + 1`` unit elements, vertices at 0..n+1."""

    n_inner: int

    kind = "interval"

    def __post_init__(self):
        if int(self.n_inner) != self.n_inner or self.n_inner < 0:
            raise ConfigError("inner node count must be a nonnegative integer")

    @property
    def n_vertices(self) -> int:
        return self.n_inner + 2

    @property
    def n_elements(self) -> int:
        return self.n_inner + 1

    @property
    def length(self) -> float:
        return float(self.n_inner + 1)


@dataclass(frozen=True)
class ClosedPolygon:
    """Periodic vertex loop; vertex i sits at parameter i, indices mod n."""

    n_vertices: int

    kind = "polygon"

    def __post_init__(self):
        if int(self.n_vertices) != self.n_vertices or self.n_vertices < 3:
            raise ConfigError("a closed polygon needs at least 3 vertices")

    @property
    def n_elements(self) -> int:
        return self.n_vertices


@dataclass(frozen=True)
class ChartFrame:
    """A chart paired with the local basis actually used on it.

    Boundary charts of an open interval keep only half of the reference
    cell; a piecewise local basis degenerates there (the split would sit
    on the cell edge), so such charts swap in the single-patch basis of
    the same degree.
    """

    chart: object
    local: object

    def ref(self, xn: np.ndarray, domain):
        """Reference coordinate in [-1, 1] and its node-coordinate rate."""
        a, b = self.chart.support
        if self.chart.kind == "periodic":
            r = 0.5 * (b - a)
            return chart_u(self.chart, xn, domain) / r, 1.0 / r
        return (2.0 * xn - a - b) / (b - a), 2.0 / (b - a)


class ControlPolygon:
    """Vertex data attached to the mesh: scalars or points in R^3."""

    def __init__(self, vertices, closed: bool):
        v = np.asarray(vertices, dtype=float)
        if v.ndim not in (1, 2) or (v.ndim == 2 and v.shape[1] != 3):
            raise ConfigError(
                "control polygon vertices must be scalars or 3-vectors")
        if v.shape[0] < 2:
            raise ConfigError("control polygon needs at least 2 vertices")
        self.vertices = v
        self.closed = bool(closed)

    @property
    def count(self) -> int:
        return self.vertices.shape[0]

    @classmethod
    def from_json(cls, text: str) -> "ControlPolygon":
        """Parse ``{"closed": bool, "vertices": [[x, y, z], ...]}``."""
        try:
            doc = json.loads(text)
        except ValueError as exc:
            raise ConfigError(f"control polygon JSON is invalid: {exc}")
        if not isinstance(doc, dict):
            raise ConfigError("control polygon JSON must be an object")
        missing = {"closed", "vertices"} - set(doc)
        if missing:
            raise ConfigError(
                "control polygon JSON lacks keys: " + ", ".join(sorted(missing)))
        closed = doc["closed"]
        if not isinstance(closed, bool):
            raise ConfigError('"closed" must be a JSON boolean')
        verts = doc["vertices"]
        if (not isinstance(verts, list) or not verts
                or not all(isinstance(p, list) and len(p) == 3
                           and all(isinstance(c, (int, float))
                                   and not isinstance(c, bool) for c in p)
                           for p in verts)):
            raise ConfigError('"vertices" must be a list of [x, y, z] triples')
        return cls(np.asarray(verts, dtype=float), closed)


class ManifoldConfig:
    """Immutable bundle of domain, blending family, and local basis.

    ``interval`` optionally maps the node coordinates of an open
    interval domain onto a physical interval (a, b); all public
    evaluation then takes physical coordinates and derivatives pick up
    the chain factor.  Projector matrices are cached lazily per chart;
    the configuration itself is never mutated after construction.
    """

    def __init__(self, domain, family, local, interval=None):
        self.domain = domain
        self.family = family
        self.local = local
        self.charts = build_charts(family, domain)
        if interval is not None:
            if domain.kind != "interval":
                raise ConfigError(
                    "a physical interval only applies to interval domains")
            a, b = float(interval[0]), float(interval[1])
            if not a < b:
                raise ConfigError("physical interval must satisfy a < b")
            self.interval = (a, b)
            self.node_scale = domain.length / (b - a)
        else:
            self.interval = None
            self.node_scale = 1.0
        self.frames = tuple(self._make_frame(c) for c in self.charts)
        self._proj_cache = {}

    def _make_frame(self, chart) -> ChartFrame:
        local = self.local
        if isinstance(local, PiecewiseBezierBasis) and chart.kind == "shift":
            a, b = chart.support
            if (abs(a - chart.center) < KNOT_SNAP
                    or abs(b - chart.center) < KNOT_SNAP):
                local = BezierBasis(local.degree)
        return ChartFrame(chart, local)

    def to_nodes(self, x):
        if self.interval is None:
            return x
        return (x - self.interval[0]) * self.node_scale

    def from_nodes(self, xn):
        if self.interval is None:
            return xn
        return self.interval[0] + xn / self.node_scale


class GlobalBasisHandle:
    """Stable enumeration of the products w_i * p_i^(j), chart-major."""

    def __init__(self, config: ManifoldConfig):
        self.config = config
        self.frames = config.frames
        counts = [f.local.count for f in self.frames]
        self.offsets = tuple(int(o) for o in
                             np.concatenate(([0], np.cumsum(counts)[:-1])))
        self.count = int(sum(counts))

    def split(self, g: int):
        """Global index -> (chart index, local index)."""
        if not 0 <= g < self.count:
            raise ConfigError(f"global index {g} out of range")
        i = int(np.searchsorted(self.offsets, g, side="right")) - 1
        return i, g - self.offsets[i]


def _check_domain(config: ManifoldConfig, xn: np.ndarray) -> None:
    if config.domain.kind != "interval":
        return
    xs = _snap(np.atleast_1d(xn))
    top = config.domain.length
    if np.any(xs < 0.0) or np.any(xs > top):
        raise DomainError(
            f"parameter outside the domain [0, {top:g}] in node coordinates")


def _active_mask(chart, xn: np.ndarray, domain, side: str) -> np.ndarray:
    u = chart_u(chart, xn, domain)
    us = _snap(u)
    a, b = chart.support
    if chart.kind == "periodic":
        r = 0.5 * (b - a)
        lo, hi = -r, r
    else:
        lo, hi = a - chart.center, b - chart.center
    if side == "left":
        return (us > lo) & (us <= hi)
    return (us >= lo) & (us < hi)


def _products_block(config, frame, xn, d, side):
    """d-th node-derivative of every product of one chart at active points.

    Returns (local count, len(xn)); Leibniz rule over the weight and the
    affinely mapped local polynomial.
    """
    w = weight_ders(config.family, frame.chart, xn, d, config.domain, side)
    uref, jac = frame.ref(xn, config.domain)
    p = frame.local.ders_matrix(uref, d, side)
    out = np.zeros((frame.local.count, xn.size))
    for m in range(d + 1):
        out += math.comb(d, m) * w[m] * p[:, d - m, :] * jac ** (d - m)
    return out


def global_basis_eval(handle: GlobalBasisHandle, xi, d: int = 0,
                      side: str = "right"):
    """Sparse evaluation: list of (global index, value) pairs.

    Entries that are exactly zero at the point (inactive half-patches,
    vanishing weights) are dropped, mirroring the open-knot evaluator.
    """
    config = handle.config
    xn = config.to_nodes(float(xi))
    _check_domain(config, xn)
    side = effective_side(config.domain, xn, side)
    arr = np.asarray([xn], dtype=float)
    scale = config.node_scale ** d
    entries = []
    for frame, off in zip(handle.frames, handle.offsets):
        if not _active_mask(frame.chart, arr, config.domain, side)[0]:
            continue
        vals = _products_block(config, frame, arr, d, side)[:, 0]
        entries.extend((off + j, float(v) * scale)
                       for j, v in enumerate(vals) if v != 0.0)
    return entries


def dense_matrix(handle: GlobalBasisHandle, xi, d: int = 0,
                 side: str = "right") -> np.ndarray:
    """Dense (n points, handle.count) table of the global products."""
    config = handle.config
    x = np.atleast_1d(np.asarray(xi, dtype=float))
    xn = np.atleast_1d(config.to_nodes(x))
    _check_domain(config, xn)
    want_left = np.full(xn.shape, side == "left")
    if config.domain.kind == "interval":
        # endpoint limits must point inward
        want_left[np.abs(xn) < KNOT_SNAP] = False
        want_left[np.abs(xn - config.domain.length) < KNOT_SNAP] = True
    scale = config.node_scale ** d
    out = np.zeros((xn.size, handle.count))
    for flag, sd in ((False, "right"), (True, "left")):
        rows = np.nonzero(want_left == flag)[0]
        if rows.size == 0:
            continue
        for frame, off in zip(handle.frames, handle.offsets):
            mask = _active_mask(frame.chart, xn[rows], config.domain, sd)
            if not mask.any():
                continue
            sel = rows[mask]
            vals = _products_block(config, frame, xn[sel], d, sd)
            out[sel, off:off + frame.local.count] = vals.T * scale
    return out


def _check_polygon(config: ManifoldConfig, polygon: ControlPolygon) -> None:
    dom = config.domain
    if dom.kind == "polygon":
        if not polygon.closed:
            raise ConfigError(
                "a closed polygon domain needs a closed control polygon")
        want = dom.n_vertices
    else:
        if polygon.closed:
            raise ConfigError(
                "an open interval domain needs an open control polygon")
        want = dom.n_vertices
    if polygon.count != want:
        raise ConfigError(
            f"control polygon has {polygon.count} vertices, "
            f"the mesh has {want}")


def _ring(config: ManifoldConfig, i: int):
    """Vertex ids and reference parameters of chart i's vertex ring."""
    frame = config.frames[i]
    chart = frame.chart
    if chart.kind not in ("shift", "periodic"):
        raise ConfigError(
            "the design space needs vertex-centered charts; the "
            f"'{config.family.name}' family on an interval does not "
            "provide them")
    n_v = int(round(config.family.support_radius))
    dom = config.domain
    ks = range(-n_v, n_v + 1)
    if dom.kind == "polygon":
        vids = [(i + k) % dom.n_vertices for k in ks]
    else:
        c = int(round(chart.center))
        if c - n_v < 0 or c + n_v > dom.n_inner + 1:
            raise ConfigError(
                f"chart {i} lacks a full vertex ring; design-space "
                "operations need a closed polygon or an interior chart")
        vids = [c + k for k in ks]
    r = frame.chart.support
    radius = 0.5 * (r[1] - r[0])
    uref = np.asarray(ks, dtype=float) / radius
    return frame, vids, uref


def design_projector(config: ManifoldConfig, polygon: ControlPolygon,
                     i: int) -> np.ndarray:
    """Matrix mapping the global vertex array to chart i's local coefficients.

    Least-squares fit of the local basis to the nodal values at the
    chart's vertex parameters, composed with the ring gather.  With an
    interpolatory local basis of matching size this reduces to picking
    out the ring values unchanged.
    """
    _check_polygon(config, polygon)
    key = (i, polygon.count)
    cached = config._proj_cache.get(key)
    if cached is None:
        frame, vids, uref = _ring(config, i)
        m = len(vids)
        if frame.local.count > m:
            raise RankError(
                f"local basis has {frame.local.count} coefficients but "
                f"chart {i} sees only {m} vertices; lower the local "
                "polynomial degree")
        v = frame.local.ders_matrix(uref, 0)[:, 0, :].T
        sing = np.linalg.svd(v, compute_uv=False)
        if sing[-1] <= 1e-12 * sing[0]:
            raise RankError(
                f"vertex collocation of chart {i} is rank deficient")
        cached = (np.linalg.pinv(v), tuple(vids))
        config._proj_cache[key] = cached
    fit, vids = cached
    out = np.zeros((fit.shape[0], polygon.count))
    out[:, list(vids)] = fit
    return out


def shape_functions(config: ManifoldConfig, polygon: ControlPolygon,
                    eta: float, s: int, d: int = 0,
                    side: str = "right") -> np.ndarray:
    """Dense element shape row N(eta, s) against the vertex array."""
    _check_polygon(config, polygon)
    eta = float(eta)
    if not -KNOT_SNAP <= eta <= 1.0 + KNOT_SNAP:
        raise DomainError("reference coordinate must lie in [0, 1]")
    dom = config.domain
    if dom.kind == "polygon":
        s = int(s) % dom.n_elements
        xn = (s + eta) % dom.n_vertices
    else:
        if not 0 <= s < dom.n_elements:
            raise DomainError(
                f"element index {s} out of range 0..{dom.n_elements - 1}")
        xn = s + eta
    side = effective_side(dom, xn, side)
    arr = np.asarray([xn], dtype=float)
    scale = config.node_scale ** d
    row = np.zeros(polygon.count)
    for i, frame in enumerate(config.frames):
        if not _active_mask(frame.chart, arr, dom, side)[0]:
            continue
        prod = _products_block(config, frame, arr, d, side)[:, 0] * scale
        row += prod @ design_projector(config, polygon, i)
    return row


def curve_eval(config: ManifoldConfig, polygon: ControlPolygon,
               eta: float, s: int):
    """Point on the manifold curve defined by a closed control polygon."""
    if not polygon.closed:
        raise ConfigError("curve evaluation needs a closed control polygon")
    row = shape_functions(config, polygon, eta, s, 0)
    return row @ polygon.vertices


class MatchedBasis:
    """Blending-invariant reconstruction of the open-knot cubic space.

    Fixes the local coefficients on every chart so that each product sum
    telescopes to one open-knot cubic C^2 basis function; since the
    local representations agree on every overlap, the result is the same
    for any partition-of-unity blending family.  Needs the piecewise
    cubic local basis on an open interval with a one-ring family.
    """

    def __init__(self, config: ManifoldConfig):
        if config.domain.kind != "interval":
            raise ConfigError("matched construction works on open intervals")
        if abs(config.family.support_radius - 1.0) > 1e-12:
            raise ConfigError(
                "matched construction needs a one-ring blending family")
        if (not isinstance(config.local, PiecewiseBezierBasis)
                or config.local.degree != 3):
            raise ConfigError(
                "matched construction needs the piecewise cubic local basis")
        self.config = config
        self.handle = GlobalBasisHandle(config)
        dom = config.domain
        self.space = make_space(3, 2, (0.0, dom.length), dom.n_inner)
        self._stack = np.vstack([self._collocate(f) for f in self.handle.frames])

    def _collocate(self, frame) -> np.ndarray:
        """Local coefficients of every target function on one chart.

        Value collocation at 4 Chebyshev-Lobatto points per polynomial
        piece; the targets and the local patches are both cubic there, so
        the square solve is exact up to roundoff.
        """
        chart = frame.chart
        a, b = chart.support
        if isinstance(frame.local, PiecewiseBezierBasis):
            pieces = ((a, chart.center, "left"), (chart.center, b, "right"))
        else:
            pieces = ((a, b, "right"),)
        vrows, grows = [], []
        for lo, hi, sd in pieces:
            pts = lobatto_points(3, lo, hi)
            uref, _ = frame.ref(pts, self.config.domain)
            vrows.append(frame.local.ders_matrix(uref, 0, sd)[:, 0, :].T)
            grows.append(basis_matrix(self.space, pts, 0, sd))
        v = np.vstack(vrows)
        g = np.vstack(grows)
        coeffs = np.linalg.solve(v, g)
        if np.abs(v @ coeffs - g).max() > 1e-8:
            raise NumericalError("matched collocation did not reproduce "
                                 "the target space on a chart")
        return coeffs

    @property
    def count(self) -> int:
        return self.space.dim

    def matrix(self, xi, d: int = 0, side: str = "right") -> np.ndarray:
        return dense_matrix(self.handle, xi, d, side) @ self._stack

    def eval(self, k: int, xi, d: int = 0, side: str = "right") -> float:
        if not 0 <= k < self.count:
            raise ConfigError(f"matched index {k} out of range")
        return float(self.matrix(np.asarray([xi], dtype=float), d, side)[0, k])

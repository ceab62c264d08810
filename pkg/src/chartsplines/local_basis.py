"""Chart-local polynomial bases.

All bases live on the reference chart ``[-1, 1]``; the atlas maps each
chart's support onto that interval affinely.  Three flavours are
provided: interpolatory Lagrange, Bernstein (one patch over the whole
chart), and a two-patch Bernstein basis split at the chart center whose
doubled coefficient count gives the matching construction enough freedom
to reproduce splines exactly.
"""

from __future__ import annotations

from fractions import Fraction
import math

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import ConfigError
from .spline_core import KNOT_SNAP, cardinal_eval

__all__ = [
    "LagrangeBasis",
    "BezierBasis",
    "PiecewiseBezierBasis",
    "local_eval",
    "matching_matrix",
    "lobatto_points",
]


def _polyset_ders(coeffs: np.ndarray, u: np.ndarray, nd: int) -> np.ndarray:
    """Evaluate a stack of polynomials and derivatives: (count, nd+1, n)."""
    count = coeffs.shape[0]
    out = np.empty((count, nd + 1, u.size))
    for j in range(count):
        c = coeffs[j]
        for d in range(nd + 1):
            out[j, d] = npoly.polyval(u, c if d == 0 else npoly.polyder(c, d))
    return out


class LagrangeBasis:
    """Interpolatory basis at ``degree + 1`` nodes on the reference chart."""

    kind = "lagrange"

    def __init__(self, degree: int, nodes=None):
        if degree < 0:
            raise ConfigError("local degree must be non-negative")
        self.degree = int(degree)
        if nodes is None:
            nodes = np.linspace(-1.0, 1.0, degree + 1) if degree > 0 \
                else np.array([0.0])
        self.nodes = np.asarray(nodes, dtype=float)
        if self.nodes.size != degree + 1:
            raise ConfigError("need exactly degree + 1 Lagrange nodes")
        self.count = degree + 1
        coeffs = np.zeros((self.count, degree + 1))
        for j in range(self.count):
            c = np.array([1.0])
            for k in range(self.count):
                if k == j:
                    continue
                c = npoly.polymul(c, np.array([-self.nodes[k], 1.0]))
                c /= self.nodes[j] - self.nodes[k]
            coeffs[j, : c.size] = c
        self._coeffs = coeffs

    def ref_breakpoints(self):
        return (Fraction(-1), Fraction(1))

    def ders_matrix(self, u, nd: int, side: str = "right") -> np.ndarray:
        return _polyset_ders(self._coeffs, np.asarray(u, dtype=float), nd)


def _bernstein_coeffs(degree: int, a: float, b: float) -> np.ndarray:
    """Monomial coefficients of the Bernstein basis over ``[a, b]``."""
    width = b - a
    up = np.array([-a / width, 1.0 / width])        # (u - a) / (b - a)
    down = np.array([b / width, -1.0 / width])      # (b - u) / (b - a)
    coeffs = np.zeros((degree + 1, degree + 1))
    for j in range(degree + 1):
        c = np.array([float(math.comb(degree, j))])
        for _ in range(j):
            c = npoly.polymul(c, up)
        for _ in range(degree - j):
            c = npoly.polymul(c, down)
        coeffs[j, : c.size] = c
    return coeffs


class BezierBasis:
    """Bernstein polynomials over the whole reference chart."""

    kind = "bezier"

    def __init__(self, degree: int):
        if degree < 0:
            raise ConfigError("local degree must be non-negative")
        self.degree = int(degree)
        self.count = degree + 1
        self._coeffs = _bernstein_coeffs(degree, -1.0, 1.0)

    def ref_breakpoints(self):
        return (Fraction(-1), Fraction(1))

    def ders_matrix(self, u, nd: int, side: str = "right") -> np.ndarray:
        return _polyset_ders(self._coeffs, np.asarray(u, dtype=float), nd)


class PiecewiseBezierBasis:
    """Two independent Bernstein patches split at the chart center.

    The first ``degree + 1`` functions live on ``[-1, 0]`` and vanish on
    the right half, the rest mirror this on ``[0, 1]``.  Piece selection
    is right-continuous; pass ``side="left"`` for the limit from below
    at the split.
    """

    kind = "piecewise_bezier"

    def __init__(self, degree: int):
        if degree < 0:
            raise ConfigError("local degree must be non-negative")
        self.degree = int(degree)
        self.count = 2 * (degree + 1)
        self._left = _bernstein_coeffs(degree, -1.0, 0.0)
        self._right = _bernstein_coeffs(degree, 0.0, 1.0)

    def ref_breakpoints(self):
        return (Fraction(-1), Fraction(0), Fraction(1))

    def ders_matrix(self, u, nd: int, side: str = "right") -> np.ndarray:
        u = np.asarray(u, dtype=float)
        us = np.where(np.abs(u) < KNOT_SNAP, 0.0, u)
        if side == "left":
            on_left = us <= 0.0
        else:
            on_left = us < 0.0
        out = np.zeros((self.count, nd + 1, u.size))
        m = self.degree + 1
        if np.any(on_left):
            out[:m, :, on_left] = _polyset_ders(self._left, u[on_left], nd)
        if np.any(~on_left):
            out[m:, :, ~on_left] = _polyset_ders(self._right, u[~on_left], nd)
        return out


def local_eval(spec, j: int, u, d: int = 0, side: str = "right"):
    """Value of local function ``j`` at reference coordinate ``u``."""
    if not 0 <= j < spec.count:
        raise ConfigError(f"local index {j} out of range for count {spec.count}")
    flat = np.asarray(u, dtype=float).reshape(-1)
    vals = spec.ders_matrix(flat, d, side)[j, d]
    if np.isscalar(u) or np.asarray(u).shape == ():
        return float(vals[0])
    return vals.reshape(np.asarray(u).shape)


def lobatto_points(degree: int, a: float, b: float) -> np.ndarray:
    """Chebyshev point family including both interval ends, ascending."""
    r = np.arange(degree + 1)
    pts = np.cos(np.pi * r / degree)[::-1] if degree > 0 else np.array([0.0])
    return (a + b) / 2.0 + (b - a) / 2.0 * pts


def matching_matrix(q_p: int = 3) -> np.ndarray:
    """Interior-chart map from gathered spline coefficients to the two
    Bernstein patches.

    For odd local degree the uniform max-smooth splines of that degree
    restrict to a chart as two polynomial pieces split at the center, so
    collocation at ``q_p + 1`` points per half determines the patch
    coefficients exactly.  The gather is the ``q_p + 2`` spline functions
    whose support meets the chart; for ``q_p = 3`` the result is the
    8 x 5 map whose rows are the classic uniform-cubic Bezier ordinates.
    """
    if q_p < 1 or q_p % 2 == 0:
        raise ConfigError("matching needs an odd local degree")
    basis = PiecewiseBezierBasis(q_p)
    half = (q_p + 1) // 2
    centers = np.arange(-half, half + 1, dtype=float)
    pts_l = lobatto_points(q_p, -1.0, 0.0)
    pts_r = lobatto_points(q_p, 0.0, 1.0)
    pts = np.concatenate([pts_l, pts_r])
    sides = ["left"] * pts_l.size + ["right"] * pts_r.size
    v = np.zeros((basis.count, basis.count))
    g = np.zeros((basis.count, centers.size))
    for r, (x, side) in enumerate(zip(pts, sides)):
        row = basis.ders_matrix(np.array([x]), 0, side)[:, 0, 0]
        v[r] = row
        g[r] = cardinal_eval(q_p, x - centers, 0, side)
    return np.linalg.solve(v, g)

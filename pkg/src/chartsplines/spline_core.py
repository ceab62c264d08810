"""Uniform B-spline primitives.

Two building blocks live here: the centered cardinal B-spline of a given
degree, evaluated directly from its uniform knot structure, and open-knot
spline spaces of prescribed degree and smoothness on an interval.  Both
evaluators are one-sided aware: at a knot the returned value is the limit
from the requested side, which is what the smoothness probes elsewhere in
the package rely on.

Piece selection is right-continuous by default; the right endpoint of a
space's interval is served by the last piece so that evaluation stays
total on the closed interval.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConfigError, DomainError

# Relative slack under which an evaluation point is treated as sitting
# exactly on a knot.  Knot spacings in this package are never below 1/4
# of an element, so 1e-9 is unambiguous.
KNOT_SNAP = 1e-9

__all__ = [
    "KNOT_SNAP",
    "SplineSpace",
    "make_space",
    "cardinal_eval",
    "space_basis_eval",
    "basis_matrix",
    "evaluate_spline",
]


def _as_flat(t):
    arr = np.asarray(t, dtype=float)
    return arr.reshape(-1), arr.shape


def _uniform_nonzero(degree: int, s: np.ndarray) -> np.ndarray:
    """All ``degree + 1`` unit-knot basis values on one piece.

    ``s`` is the local coordinate in ``[0, 1)`` within the piece.  Row
    ``r`` holds the function whose leftmost knot sits ``degree - r``
    pieces to the left of the current one.
    """
    n = s.size
    v = np.zeros((degree + 1, n))
    v[0] = 1.0
    for k in range(1, degree + 1):
        prev = v[: k].copy()
        for r in range(k, -1, -1):
            acc = np.zeros(n)
            if r - 1 >= 0:
                acc += (s + (k - r)) * prev[r - 1]
            if r <= k - 1:
                acc += ((r + 1) - s) * prev[r]
            v[r] = acc / k
    return v


def _cardinal_values(degree: int, t: np.ndarray, side: str) -> np.ndarray:
    """Centered cardinal B-spline of ``degree`` at flat array ``t``."""
    x = t + (degree + 1) / 2.0
    xr = np.round(x)
    snapped = np.where(np.abs(x - xr) < KNOT_SNAP, xr, x)
    if side == "left":
        m = np.ceil(snapped) - 1.0
    else:
        m = np.floor(snapped)
    m_int = m.astype(np.int64)
    inside = (m_int >= 0) & (m_int <= degree)
    s = np.where(inside, snapped - m, 0.0)
    v = _uniform_nonzero(degree, s)
    rows = np.clip(degree - m_int, 0, degree)
    vals = v[rows, np.arange(t.size)]
    return np.where(inside, vals, 0.0)


def cardinal_eval(degree: int, t, d: int = 0, side: str = "right"):
    """Evaluate the centered cardinal B-spline or one of its derivatives.

    Parameters
    ----------
    degree : int
        Polynomial degree ``p >= 0``; the support is
        ``[-(p + 1) / 2, (p + 1) / 2]``.
    t : float or array_like
        Evaluation points.
    d : int
        Derivative order.  Orders above ``degree`` return 0, the
        piecewise value of the vanished derivative.
    side : {"right", "left"}
        Which one-sided limit to take when ``t`` sits on a knot.

    Returns
    -------
    float or ndarray
        Value(s); exactly 0.0 outside the closed support.
    """
    if degree < 0:
        raise ConfigError("cardinal degree must be non-negative")
    if d < 0:
        raise ConfigError("derivative order must be non-negative")
    if side not in ("right", "left"):
        raise ConfigError(f"unknown side {side!r}")
    flat, shape = _as_flat(t)
    if d > degree:
        out = np.zeros(flat.size)
    elif d == 0:
        out = _cardinal_values(degree, flat, side)
    else:
        # d-th derivative as an alternating sum of shifted lower-degree
        # cardinals; the half-integer shifts are exact in binary floats.
        q = degree - d
        out = np.zeros(flat.size)
        for j in range(d + 1):
            coeff = (-1.0) ** j * math.comb(d, j)
            out += coeff * _cardinal_values(q, flat + (d / 2.0 - j), side)
    if shape == ():
        return float(out[0])
    return out.reshape(shape)


class SplineSpace:
    """Open-knot spline space of degree ``p`` and smoothness ``C^r``.

    The interval carries ``n_interior`` uniformly placed interior
    breakpoints; each appears with multiplicity ``p - r`` in the knot
    vector and both interval ends appear ``p + 1`` times.
    """

    def __init__(self, degree: int, smoothness: int, interval=(0.0, 1.0),
                 n_interior: int = 0):
        if degree < 1:
            raise ConfigError("spline degree must be at least 1")
        if not -1 <= smoothness <= degree - 1:
            raise ConfigError(
                f"smoothness r={smoothness} must satisfy -1 <= r <= p-1 for p={degree}")
        if n_interior < 0:
            raise ConfigError("number of interior breakpoints must be >= 0")
        a, b = float(interval[0]), float(interval[1])
        if not a < b:
            raise ConfigError("interval must have positive length")
        self.degree = int(degree)
        self.smoothness = int(smoothness)
        self.interval = (a, b)
        self.n_interior = int(n_interior)
        self.breakpoints = np.linspace(a, b, n_interior + 2)
        mult = degree - smoothness
        knots = [a] * (degree + 1)
        for bp in self.breakpoints[1:-1]:
            knots.extend([bp] * mult)
        knots.extend([b] * (degree + 1))
        self.knots = np.asarray(knots)
        self.dim = (degree + 1) + n_interior * mult
        self._frozen = True

    def __setattr__(self, name, value):
        # instances are shared across threads; keep them immutable
        if getattr(self, "_frozen", False):
            raise AttributeError(f"SplineSpace is immutable, cannot set {name!r}")
        super().__setattr__(name, value)

    @property
    def n_elements(self) -> int:
        return self.n_interior + 1

    @property
    def knot_vector(self) -> np.ndarray:
        return self.knots

    def greville(self) -> np.ndarray:
        """Knot averages; coefficients at these abscissae reproduce lines."""
        p = self.degree
        return np.array([self.knots[k + 1: k + p + 1].mean()
                         for k in range(self.dim)])

    def __repr__(self):  # pragma: no cover
        a, b = self.interval
        return (f"SplineSpace(p={self.degree}, r={self.smoothness}, "
                f"[{a:g}, {b:g}], n={self.n_interior})")


def make_space(degree: int, smoothness: int, interval=(0.0, 1.0),
               n_interior: int = 0) -> SplineSpace:
    """Construct a :class:`SplineSpace`; see the class for the contract."""
    return SplineSpace(degree, smoothness, interval, n_interior)


def _find_span(space: SplineSpace, x: float, side: str):
    """Locate the knot span serving ``x``; returns ``(span, snapped_x)``."""
    a, b = space.interval
    h = (b - a) / space.n_elements
    slack = KNOT_SNAP * max(h, 1.0)
    if x < a - slack or x > b + slack:
        raise DomainError(f"point {x!r} outside interval [{a!r}, {b!r}]")
    j = round((x - a) / h)
    if 0 <= j <= space.n_elements and abs(x - (a + j * h)) < slack:
        x = float(space.breakpoints[j])
    knots = space.knots
    p = space.degree
    if side == "left":
        span = int(np.searchsorted(knots, x, side="left")) - 1
    else:
        span = int(np.searchsorted(knots, x, side="right")) - 1
    span = min(max(span, p), len(knots) - p - 2)
    return span, x


def _ders_at_span(knots: np.ndarray, p: int, span: int, x: np.ndarray,
                  nd: int) -> np.ndarray:
    """Derivatives of the ``p + 1`` active functions on one span.

    Vectorized de Boor derivative table over the trailing point axis;
    returns an array of shape ``(nd + 1, p + 1, len(x))``.
    """
    n = x.size
    nd_eff = min(nd, p)
    ndu = np.zeros((p + 1, p + 1, n))
    ndu[0, 0] = 1.0
    left = np.zeros((p + 1, n))
    right = np.zeros((p + 1, n))
    for j in range(1, p + 1):
        left[j] = x - knots[span + 1 - j]
        right[j] = knots[span + j] - x
        saved = np.zeros(n)
        for r in range(j):
            ndu[j, r] = right[r + 1] + left[j - r]
            temp = ndu[r, j - 1] / ndu[j, r]
            ndu[r, j] = saved + right[r + 1] * temp
            saved = left[j - r] * temp
        ndu[j, j] = saved
    ders = np.zeros((nd + 1, p + 1, n))
    for j in range(p + 1):
        ders[0, j] = ndu[j, p]
    a = np.zeros((2, p + 1, n))
    for r in range(p + 1):
        a[:] = 0.0
        a[0, 0] = 1.0
        s1, s2 = 0, 1
        for k in range(1, nd_eff + 1):
            dsum = np.zeros(n)
            rk = r - k
            pk = p - k
            if r >= k:
                a[s2, 0] = a[s1, 0] / ndu[pk + 1, rk]
                dsum = a[s2, 0] * ndu[rk, pk]
            j1 = 1 if rk >= -1 else -rk
            j2 = k - 1 if r - 1 <= pk else p - r
            for j in range(j1, j2 + 1):
                a[s2, j] = (a[s1, j] - a[s1, j - 1]) / ndu[pk + 1, rk + j]
                dsum = dsum + a[s2, j] * ndu[rk + j, pk]
            if r <= pk:
                a[s2, k] = -a[s1, k - 1] / ndu[pk + 1, r]
                dsum = dsum + a[s2, k] * ndu[r, pk]
            ders[k, r] = dsum
            s1, s2 = s2, s1
    fact = float(p)
    for k in range(1, nd_eff + 1):
        ders[k] *= fact
        fact *= p - k
    return ders


def space_basis_eval(space: SplineSpace, xi: float, d: int = 0,
                     side: str = "right"):
    """Active basis functions of ``space`` at ``xi``.

    Returns a list of ``(index, value)`` pairs covering every basis
    function that is nonzero at ``xi`` for the requested derivative
    order; at most ``p + 1`` entries.
    """
    if d < 0:
        raise ConfigError("derivative order must be non-negative")
    if side not in ("right", "left"):
        raise ConfigError(f"unknown side {side!r}")
    span, x = _find_span(space, float(xi), side)
    ders = _ders_at_span(space.knots, space.degree, span,
                         np.array([x]), d)
    first = span - space.degree
    out = []
    for r in range(space.degree + 1):
        val = float(ders[d, r, 0])
        if val != 0.0:
            out.append((first + r, val))
    return out


def basis_matrix(space: SplineSpace, pts, d: int = 0,
                 side: str = "right") -> np.ndarray:
    """Dense collocation matrix of shape ``(len(pts), space.dim)``."""
    flat, _ = _as_flat(pts)
    spans = np.empty(flat.size, dtype=np.int64)
    snapped = np.empty(flat.size)
    for i, x in enumerate(flat):
        spans[i], snapped[i] = _find_span(space, float(x), side)
    out = np.zeros((flat.size, space.dim))
    for span in np.unique(spans):
        sel = spans == span
        ders = _ders_at_span(space.knots, space.degree, int(span),
                             snapped[sel], d)
        first = int(span) - space.degree
        out[np.ix_(sel, range(first, first + space.degree + 1))] = ders[d].T
    return out


def evaluate_spline(space: SplineSpace, coeffs, pts, d: int = 0,
                    side: str = "right"):
    """Evaluate the spline with the given coefficient vector."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape[0] != space.dim:
        raise ConfigError(
            f"expected {space.dim} coefficients, got {coeffs.shape[0]}")
    flat, shape = _as_flat(pts)
    vals = basis_matrix(space, flat, d, side) @ coeffs
    if shape == ():
        return float(vals[0])
    return vals.reshape(shape)

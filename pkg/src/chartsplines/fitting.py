"""Breakpoint-aware quadrature, L2 projection, and measurement probes.

Everything here treats a configuration (or a matched basis) as a black
box that can tabulate its functions at points; the probes measure
partition quality, smoothness, breakpoint structure, reproduction
residuals, and convergence rates rather than asserting them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from .errors import ConfigError, NumericalError
from .spline_core import SplineSpace, basis_matrix, make_space
from .blending import breakpoints
from .atlas import GlobalBasisHandle, ManifoldConfig, MatchedBasis, dense_matrix

__all__ = [
    "QuadratureCell",
    "FitReport",
    "ConvergenceTable",
    "quadrature_cells",
    "l2_fit",
    "evaluate_fit",
    "reproduction_residual",
    "smoothness_probe",
    "measure_smoothness_order",
    "breakpoints_per_element",
    "detected_breakpoints_per_element",
    "span_rank",
    "convergence_study",
    "spline_fit_error",
    "sin_target",
    "polynomial_target",
]

RANK_RCOND = 1e-10


@dataclass(frozen=True)
class QuadratureCell:
    """One Gauss rule on a subinterval free of interior breakpoints."""

    a: float
    b: float
    points: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True)
class FitReport:
    """Least-squares fit onto the analysis span."""

    coefficients: np.ndarray
    l2_error: float
    rank: int
    residual_norm: float


@dataclass(frozen=True)
class ConvergenceTable:
    """Rows of (level, mesh size, L2 error, observed rate)."""

    rows: tuple

    @property
    def final_rate(self) -> float:
        return self.rows[-1][3]


def _parts(obj):
    """(tabulate function, column count, config) for config or matched."""
    if isinstance(obj, MatchedBasis):
        return obj.matrix, obj.count, obj.config
    if isinstance(obj, ManifoldConfig):
        handle = GlobalBasisHandle(obj)
        return (lambda xi, d=0, side="right": dense_matrix(handle, xi, d, side),
                handle.count, obj)
    raise ConfigError(f"cannot fit objects of type {type(obj).__name__}")


def _element_cuts(config: ManifoldConfig):
    """Per element, the sorted interior breakpoints as exact rationals."""
    dom = config.domain
    wrap = dom.n_vertices if dom.kind == "polygon" else None
    cuts = [set() for _ in range(dom.n_elements)]
    for i in range(len(config.charts)):
        for t in breakpoints(config, i).absolute():
            if wrap is not None:
                t = t % wrap
            for e in range(dom.n_elements):
                if e < t < e + 1:
                    cuts[e].add(t)
    return [tuple(sorted(c)) for c in cuts]


def _default_nq(config: ManifoldConfig) -> int:
    # rational integrands are never polynomially exact; use a fatter rule
    return 12 if config.family.name == "rational" else 8


def quadrature_cells(obj, n_q: int | None = None):
    """Element-by-element Gauss cells split at every breakpoint."""
    _, _, config = _parts(obj)
    if n_q is None:
        n_q = _default_nq(config)
    if n_q < 1:
        raise ConfigError("quadrature rule needs at least one point")
    g, gw = np.polynomial.legendre.leggauss(int(n_q))
    cells = []
    for e, interior in enumerate(_element_cuts(config)):
        bounds = [Fraction(e), *interior, Fraction(e + 1)]
        for lo, hi in zip(bounds[:-1], bounds[1:]):
            a = config.from_nodes(float(lo))
            b = config.from_nodes(float(hi))
            mid, half = 0.5 * (a + b), 0.5 * (b - a)
            cells.append(QuadratureCell(a, b, mid + half * g, half * gw))
    return cells


def _system(obj, n_q):
    tab, count, _ = _parts(obj)
    cells = quadrature_cells(obj, n_q)
    x = np.concatenate([c.points for c in cells])
    w = np.concatenate([c.weights for c in cells])
    phi = tab(x, 0)
    return tab, count, x, w, phi


def l2_fit(obj, target, n_q: int | None = None) -> FitReport:
    """Weighted least squares of ``target`` onto the analysis span.

    The reported error is recomputed by quadrature of the squared
    residual, not read off the solver.
    """
    tab, count, x, w, phi = _system(obj, n_q)
    f = np.asarray(target(x), dtype=float)
    if f.shape != x.shape or not np.all(np.isfinite(f)):
        raise NumericalError("target did not produce finite values at the "
                             "quadrature points")
    sw = np.sqrt(w)
    try:
        coef, _, rank, _ = np.linalg.lstsq(phi * sw[:, None], f * sw,
                                           rcond=RANK_RCOND)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"least-squares fit failed: {exc}")
    resid = phi @ coef - f
    err = math.sqrt(float(np.sum(w * resid ** 2)))
    return FitReport(coef, err, int(rank),
                     float(np.linalg.norm(resid * sw)))


def evaluate_fit(obj, report: FitReport, xi, d: int = 0,
                 side: str = "right") -> np.ndarray:
    tab, _, _ = _parts(obj)
    return tab(np.asarray(xi, dtype=float), d, side) @ report.coefficients


def _check_reference(config: ManifoldConfig, reference: SplineSpace) -> None:
    dom = config.domain
    if dom.kind != "interval":
        raise ConfigError("reproduction checks run on interval domains")
    lo = config.from_nodes(0.0)
    hi = config.from_nodes(dom.length)
    if (reference.n_interior != dom.n_inner
            or abs(reference.interval[0] - lo) > 1e-12
            or abs(reference.interval[1] - hi) > 1e-12):
        raise ConfigError("reference spline space must share the "
                          "configuration's element partition")


def reproduction_residual(obj, reference: SplineSpace,
                          n_q: int | None = None) -> float:
    """Worst L2 fit error over all basis functions of a reference space."""
    _, _, config = _parts(obj)
    _check_reference(config, reference)
    tab, count, x, w, phi = _system(obj, n_q)
    targets = basis_matrix(reference, x, 0)
    sw = np.sqrt(w)
    coef, _, _, _ = np.linalg.lstsq(phi * sw[:, None], targets * sw[:, None],
                                    rcond=RANK_RCOND)
    resid = phi @ coef - targets
    errs = np.sqrt(np.sum(w[:, None] * resid ** 2, axis=0))
    return float(errs.max())


def _probe_points(config: ManifoldConfig):
    """All interior breakpoints of the configuration, in node coordinates."""
    dom = config.domain
    pts = set()
    for i in range(len(config.charts)):
        for t in breakpoints(config, i).absolute():
            if dom.kind == "polygon":
                pts.add(t % dom.n_vertices)
            elif 0 < t < dom.n_elements:
                pts.add(t)
    return sorted(pts)


def smoothness_probe(obj, k: int) -> float:
    """Largest one-sided derivative jump of any function, orders <= k."""
    tab, _, config = _parts(obj)
    pts = _probe_points(config)
    if not pts:
        return 0.0
    x = config.from_nodes(np.asarray([float(t) for t in pts]))
    worst = 0.0
    for d in range(k + 1):
        gap = np.abs(tab(x, d, "right") - tab(x, d, "left"))
        worst = max(worst, float(gap.max()))
    return worst


def measure_smoothness_order(obj, max_order: int = 4,
                             tol: float = 1e-8) -> int:
    """Largest k with all derivative jumps below tol, capped at max_order."""
    tab, _, config = _parts(obj)
    pts = _probe_points(config)
    if not pts:
        return max_order
    x = config.from_nodes(np.asarray([float(t) for t in pts]))
    for d in range(max_order + 1):
        gap = np.abs(tab(x, d, "right") - tab(x, d, "left")).max()
        if gap >= tol:
            return d - 1
    return max_order


def breakpoints_per_element(obj) -> int:
    """Interior breakpoints per element of the piecewise structure."""
    _, _, config = _parts(obj)
    return max(len(c) for c in _element_cuts(config))


def detected_breakpoints_per_element(obj, max_order: int = 4,
                                     tol: float = 1e-8) -> int:
    """Interior points per element where some derivative jump survives.

    A construction knot does not have to carry a visible discontinuity:
    adjacent pieces can match to every order the probe can see.  This
    counts only the cuts that do jump somewhere in orders <= max_order.
    """
    tab, _, config = _parts(obj)
    best = 0
    for e, interior in enumerate(_element_cuts(config)):
        if not interior:
            continue
        x = config.from_nodes(np.asarray([float(t) for t in interior]))
        alive = np.zeros(len(interior), dtype=bool)
        for d in range(max_order + 1):
            gap = np.abs(tab(x, d, "right") - tab(x, d, "left")).max(axis=1)
            alive |= gap >= tol
        best = max(best, int(alive.sum()))
    return best


def span_rank(obj, n_q: int | None = None):
    """(function count, numerical rank) of the dense collocation table."""
    _, count, x, w, phi = _system(obj, n_q)
    sing = np.linalg.svd(phi, compute_uv=False)
    rank = int(np.sum(sing > RANK_RCOND * sing[0]))
    return count, rank


def sin_target(x):
    return np.sin(np.pi * np.asarray(x, dtype=float))


def polynomial_target(degree: int):
    """Fixed full-degree polynomial, coefficients (-1)^k / (k + 1)."""
    if degree < 0:
        raise ConfigError("polynomial target degree must be >= 0")
    coeffs = np.array([(-1.0) ** k / (k + 1) for k in range(degree + 1)])

    def poly(x):
        return np.polynomial.polynomial.polyval(
            np.asarray(x, dtype=float), coeffs)

    return poly


def spline_fit_error(space: SplineSpace, target, n_q: int = 8) -> float:
    """L2 fit error of a plain spline space, same quadrature pipeline."""
    g, gw = np.polynomial.legendre.leggauss(int(n_q))
    xs, ws = [], []
    bps = space.breakpoints
    for a, b in zip(bps[:-1], bps[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        xs.append(mid + half * g)
        ws.append(half * gw)
    x = np.concatenate(xs)
    w = np.concatenate(ws)
    phi = basis_matrix(space, x, 0)
    f = np.asarray(target(x), dtype=float)
    sw = np.sqrt(w)
    coef, _, _, _ = np.linalg.lstsq(phi * sw[:, None], f * sw,
                                    rcond=RANK_RCOND)
    resid = phi @ coef - f
    return math.sqrt(float(np.sum(w * resid ** 2)))


def convergence_study(make_config, levels, target,
                      n_q: int | None = None) -> ConvergenceTable:
    """Fit the target on a dyadic mesh ladder and record observed rates.

    ``make_config(n_inner)`` must return a configuration whose mesh has
    ``n_inner + 1`` elements; level ``l`` uses ``2**(l + 2)`` of them,
    giving mesh size 1/2**(l+2) on the unit interval.
    """
    levels = [int(l) for l in levels]
    if not levels or any(b <= a for a, b in zip(levels[:-1], levels[1:])):
        raise ConfigError("levels must be nonempty and strictly ascending")
    rows = []
    prev = None
    for level in levels:
        n_elements = 2 ** (level + 2)
        config = make_config(n_elements - 1)
        _, _, cfg = _parts(config)
        lo = cfg.from_nodes(0.0)
        hi = cfg.from_nodes(cfg.domain.length)
        h = (hi - lo) / cfg.domain.n_elements
        err = l2_fit(config, target, n_q).l2_error
        rate = None if prev is None else math.log2(prev / err)
        rows.append((level, h, err, rate))
        prev = err
    return ConvergenceTable(tuple(rows))

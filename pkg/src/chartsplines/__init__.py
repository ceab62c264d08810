"""Univariate spline bases built from overlapping charts.

Compactly supported weight functions forming a partition of unity are
multiplied with chart-local polynomial bases; the products span the
analysis space, reproduce classical spline spaces for the right family
choices, and (with per-chart projectors) carry a control-polygon design
space and curve map.
"""

from .errors import ConfigError, DomainError, NumericalError, RankError
from .spline_core import (
    KNOT_SNAP,
    SplineSpace,
    basis_matrix,
    cardinal_eval,
    evaluate_spline,
    make_space,
    space_basis_eval,
)
from .blending import (
    BreakpointSet,
    Chart,
    Hat,
    MaskedCubic,
    RationalCubic,
    SmoothBSpline,
    blending_eval,
    breakpoints,
    build_charts,
    overlap_count,
)
from .local_basis import (
    BezierBasis,
    LagrangeBasis,
    PiecewiseBezierBasis,
    local_eval,
    matching_matrix,
)
from .atlas import (
    ClosedPolygon,
    ControlPolygon,
    GlobalBasisHandle,
    ManifoldConfig,
    MatchedBasis,
    OpenInterval,
    curve_eval,
    dense_matrix,
    design_projector,
    global_basis_eval,
    shape_functions,
)
from .fitting import (
    ConvergenceTable,
    FitReport,
    QuadratureCell,
    breakpoints_per_element,
    convergence_study,
    detected_breakpoints_per_element,
    evaluate_fit,
    l2_fit,
    measure_smoothness_order,
    polynomial_target,
    quadrature_cells,
    reproduction_residual,
    sin_target,
    smoothness_probe,
    span_rank,
    spline_fit_error,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "DomainError", "NumericalError", "RankError",
    "KNOT_SNAP", "SplineSpace", "make_space", "cardinal_eval",
    "space_basis_eval", "basis_matrix", "evaluate_spline",
    "Hat", "SmoothBSpline", "RationalCubic", "MaskedCubic",
    "Chart", "BreakpointSet", "build_charts", "blending_eval",
    "breakpoints", "overlap_count",
    "BezierBasis", "LagrangeBasis", "PiecewiseBezierBasis",
    "local_eval", "matching_matrix",
    "OpenInterval", "ClosedPolygon", "ManifoldConfig", "GlobalBasisHandle",
    "ControlPolygon", "global_basis_eval", "dense_matrix",
    "design_projector", "shape_functions", "curve_eval", "MatchedBasis",
    "QuadratureCell", "FitReport", "ConvergenceTable", "quadrature_cells",
    "l2_fit", "evaluate_fit", "reproduction_residual", "smoothness_probe",
    "measure_smoothness_order", "breakpoints_per_element",
    "detected_breakpoints_per_element", "span_rank", "convergence_study",
    "spline_fit_error", "sin_target", "polynomial_target",
    "__version__",
]

"""Density-peaks clustering with a compiled kernel core and a NumPy fallback.

`BACKEND` names the kernel implementation selected at import ("cython" when
the extension built, else "python"); PEAKSPAM_BACKEND forces the choice.
"""

from ._backend import BACKEND
from .core import (
    ASSIGNMENT_RULES,
    KERNELS,
    ClusteringResult,
    ClusterModel,
    DensityParams,
    FixedCenters,
    GammaJump,
    PointStats,
    assign_points,
    cluster_distances,
    compute_delta,
    compute_gamma,
    cutoff_indicator,
    decision_csv_text,
    decision_graph_data,
    density_order,
    local_density,
    model_json_text,
    point_stats,
    select_centers,
    select_dc,
)

__all__ = [
    "ASSIGNMENT_RULES",
    "BACKEND",
    "KERNELS",
    "ClusteringResult",
    "ClusterModel",
    "DensityParams",
    "FixedCenters",
    "GammaJump",
    "PointStats",
    "assign_points",
    "cluster_distances",
    "compute_delta",
    "compute_gamma",
    "cutoff_indicator",
    "decision_csv_text",
    "decision_graph_data",
    "density_order",
    "local_density",
    "model_json_text",
    "point_stats",
    "select_centers",
    "select_dc",
]

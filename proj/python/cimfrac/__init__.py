"""Contour-integral solver for time-fractional integro-differential equations."""

from ._core import (  # noqa: F401
    ContourPlan,
    ErrorRow,
    ErrorTable,
    ExperimentCase,
    FractionalOrders,
    QuadratureNodes,
    TimeSample,
    default_epsilon,
    kernel,
    make_case,
    make_plan,
    nodes,
    optimize_eta,
    p_of_eta,
    property_checks,
    run_case,
    scalar_resolvent,
    sector_check,
    spatial_error_table,
    strip_half_width,
    temporal_error_table,
)

__all__ = [
    "ContourPlan",
    "ErrorRow",
    "ErrorTable",
    "ExperimentCase",
    "FractionalOrders",
    "QuadratureNodes",
    "TimeSample",
    "default_epsilon",
    "kernel",
    "make_case",
    "make_plan",
    "nodes",
    "optimize_eta",
    "p_of_eta",
    "property_checks",
    "run_case",
    "scalar_resolvent",
    "sector_check",
    "spatial_error_table",
    "strip_half_width",
    "temporal_error_table",
]

__version__ = "0.1.0"

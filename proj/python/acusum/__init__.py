"""Adaptive CUSUM monitoring of the mean and variance of a Gaussian stream."""

from ._core import (
    AdaptiveChart,
    ArlResult,
    Artifact,
    ChartConfig,
    EwmaGlrt,
    Glrt,
    Monitor,
    WuCusum,
    branch_names,
    calibrate,
    describe,
    estimate_arl,
    q_transform,
    reproduce_table,
    table_columns,
    table_scenarios,
)

__all__ = [
    "AdaptiveChart",
    "ArlResult",
    "Artifact",
    "ChartConfig",
    "EwmaGlrt",
    "Glrt",
    "Monitor",
    "WuCusum",
    "branch_names",
    "calibrate",
    "describe",
    "estimate_arl",
    "q_transform",
    "reproduce_table",
    "table_columns",
    "table_scenarios",
]

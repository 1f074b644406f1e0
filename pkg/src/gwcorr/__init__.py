"""Geographically weighted correlation and partial correlation surfaces.

A fast engine for per-location weighted correlation statistics over point
and polygon datasets, with adaptive kernel bandwidths, local significance
tests, GeoJSON/CSV ingestion, and an HTTP explorer service.
"""

from .engine import (
    AnalysisSpec,
    DataMatrix,
    GwSurface,
    LocalResult,
    SignificanceMask,
    apply_significance_mask,
    compute_surface,
    correlation_from_cov,
    local_p_value,
    moore_penrose_pinv,
    partial_correlation_from_cov,
    rank_transform,
    weighted_covariance,
)
from .geodata import (
    Dataset,
    VariableSchema,
    dataset_to_geojson,
    document_to_json,
    listwise_complete,
    parse_geojson,
    parse_point_csv,
    representative_point,
    serialize_result,
)
from .synth import synth_dataset
from .weights import (
    KERNELS,
    WeightVector,
    adaptive_bandwidth_at,
    kernel_weight,
    pairwise_distance,
    weight_vector_at,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisSpec",
    "DataMatrix",
    "Dataset",
    "GwSurface",
    "KERNELS",
    "LocalResult",
    "SignificanceMask",
    "VariableSchema",
    "WeightVector",
    "adaptive_bandwidth_at",
    "apply_significance_mask",
    "compute_surface",
    "correlation_from_cov",
    "dataset_to_geojson",
    "document_to_json",
    "kernel_weight",
    "listwise_complete",
    "local_p_value",
    "moore_penrose_pinv",
    "pairwise_distance",
    "parse_geojson",
    "parse_point_csv",
    "partial_correlation_from_cov",
    "rank_transform",
    "representative_point",
    "serialize_result",
    "synth_dataset",
    "weight_vector_at",
    "weighted_covariance",
]

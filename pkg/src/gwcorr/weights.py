"""Distance-decay spatial weighting with adaptive bandwidths.

Weights are produced per focal location as the diagonal of the geographic
weight matrix: Euclidean distances to every observation, an adaptive
bandwidth defined as a proportion of the observation count (k nearest
neighbors, self included), and one of five kernel functions.

Available kernels:
    - ``gaussian``       exp(-(d/b)^2 / 2)
    - ``exponential``    exp(-d/b)
    - ``boxcar``         1 if d < b else 0
    - ``bisquare``       (1 - (d/b)^2)^2 if d < b else 0
    - ``tricube``        (1 - (d/b)^3)^3 if d < b else 0

Only adaptive bandwidths are supported: a fixed-distance bandwidth cannot be
requested through this module.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _accel
from .errors import AllCoincidentError, NonPositiveBandwidthError

KERNELS = ("gaussian", "exponential", "boxcar", "bisquare", "tricube")

#: Kernels whose support ends exactly at the bandwidth.
COMPACT_KERNELS = ("boxcar", "bisquare", "tricube")

_KERNEL_IDS = {
    "gaussian": _accel.GAUSSIAN,
    "exponential": _accel.EXPONENTIAL,
    "boxcar": _accel.BOXCAR,
    "bisquare": _accel.BISQUARE,
    "tricube": _accel.TRICUBE,
}


@dataclass(frozen=True)
class WeightVector:
    """Geographic weights of every observation relative to one focal location.

    Attributes
    ----------
    weights : ndarray
        One weight in [0, 1] per observation; the focal weight is 1.
    owner_index : int
        Index of the focal location.
    bandwidth_used : float
        Effective bandwidth, in coordinate length units.
    """

    weights: np.ndarray
    owner_index: int
    bandwidth_used: float


def validate_kernel(kind: str) -> str:
    if kind not in _KERNEL_IDS:
        raise ValueError(f"unknown kernel {kind!r}; expected one of {KERNELS}")
    return kind


def validate_proportion(proportion: float) -> float:
    proportion = float(proportion)
    if not (0.0 < proportion <= 1.0) or math.isnan(proportion):
        raise ValueError(f"bandwidth proportion must be in (0, 1], got {proportion}")
    return proportion


def as_coords(coords) -> np.ndarray:
    """Coerce to an (n, 2) float array of finite planar coordinates."""
    arr = np.asarray(coords, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"coordinates must have shape (n, 2), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("coordinates must be finite")
    return arr


def coords_all_coincident(coords: np.ndarray) -> bool:
    return bool(np.all(coords == coords[0]))


def adaptive_k(n: int, proportion: float) -> int:
    """Neighbor count for an adaptive bandwidth: max(2, ceil(proportion * n)).

    The self-distance counts as neighbor #1, so a proportion of 1.0 yields
    k = n (bandwidth = maximum distance). The small subtraction guards
    against binary rounding pushing an exact integer product upward
    (e.g. 0.2 * 15 evaluating to 3.0000000000000004).
    """
    return max(2, math.ceil(proportion * n - 1e-12))


def pairwise_distance(p, q) -> float:
    """Euclidean distance between two planar points."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return float(np.sqrt(dx * dx + dy * dy))


def adaptive_bandwidth_at(i: int, coords, proportion: float) -> float:
    """Effective bandwidth at location ``i``: the k-th smallest distance.

    The focal self-distance (zero) counts as the first neighbor. When the
    k-th smallest distance is zero because coordinates coincide, the
    smallest strictly positive distance is used instead.

    Raises
    ------
    AllCoincidentError
        If every observation sits on one coordinate.
    """
    coords = as_coords(coords)
    proportion = validate_proportion(proportion)
    n = coords.shape[0]
    if n < 2:
        raise ValueError("need at least 2 observations")
    if not 0 <= i < n:
        raise IndexError(f"focal index {i} out of range for {n} observations")
    if coords_all_coincident(coords):
        raise AllCoincidentError("all observations share one coordinate")
    cx = np.ascontiguousarray(coords[:, 0])
    cy = np.ascontiguousarray(coords[:, 1])
    d = _accel.distances_from(i, cx, cy)
    return float(_accel.bandwidth_from_distances(d, adaptive_k(n, proportion)))


def kernel_weight(kind: str, d, b: float):
    """Evaluate a named kernel at distance(s) ``d`` with bandwidth ``b``.

    ``d`` may be a scalar or an array; distances are assumed non-negative.
    Compact kernels use the strict cutoff ``d < b``.

    Raises
    ------
    NonPositiveBandwidthError
        If ``b <= 0``.
    """
    kind = validate_kernel(kind)
    if not b > 0.0:
        raise NonPositiveBandwidthError(f"bandwidth must be positive, got {b}")
    arr = np.asarray(d, dtype=np.float64)
    z = arr / b
    if kind == "gaussian":
        w = np.exp(-0.5 * z * z)
    elif kind == "exponential":
        w = np.exp(-z)
    elif kind == "boxcar":
        w = np.where(arr < b, 1.0, 0.0)
    elif kind == "bisquare":
        w = np.where(arr < b, (1.0 - z * z) ** 2, 0.0)
    else:  # tricube
        w = np.where(arr < b, (1.0 - z * z * z) ** 3, 0.0)
    if np.ndim(d) == 0:
        return float(w)
    return w


def weight_vector_at(i: int, coords, kind: str, proportion: float) -> WeightVector:
    """Full weight vector for focal location ``i``.

    Combines the adaptive bandwidth with the requested kernel. The focal
    weight is always exactly 1 (kernel at distance zero).
    """
    coords = as_coords(coords)
    kind = validate_kernel(kind)
    proportion = validate_proportion(proportion)
    n = coords.shape[0]
    if n < 2:
        raise ValueError("need at least 2 observations")
    if not 0 <= i < n:
        raise IndexError(f"focal index {i} out of range for {n} observations")
    if coords_all_coincident(coords):
        raise AllCoincidentError("all observations share one coordinate")
    cx = np.ascontiguousarray(coords[:, 0])
    cy = np.ascontiguousarray(coords[:, 1])
    d = _accel.distances_from(i, cx, cy)
    b = _accel.bandwidth_from_distances(d, adaptive_k(n, proportion))
    w = _accel.kernel_weights(_KERNEL_IDS[kind], d, b)
    return WeightVector(weights=w, owner_index=i, bandwidth_used=float(b))

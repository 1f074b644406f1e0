"""Geographically weighted correlation and partial correlation surfaces.

At every location the engine builds a kernel weight vector, a weighted
covariance matrix over the analysis variables (about the weighted means,
weights normalized to sum to one), and from it either plain correlations or
partial correlations via the inverted covariance (precision) matrix:

    corr_ab  =  S_ab / sqrt(S_aa * S_bb)
    pcor_ab  = -C_ab / sqrt(C_aa * C_bb),   C = S^-1

A covariance matrix that fails the Cholesky positive-definiteness probe is
inverted with a Moore-Penrose pseudo-inverse instead. Spearman variants
rank every analysis variable once, globally, before any weighting. Each
coefficient gets a two-sided t-test p-value against the zero-correlation
hypothesis, with degrees of freedom from the Kish effective sample size
(sum w)^2 / sum(w^2) minus 2 minus the number of controls.

Degenerate cells (no local variance) are no-data (NaN), never errors: they
must render as gaps on a map rather than abort an exploration.
"""

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np
from scipy.special import stdtr
from scipy.stats import rankdata

from . import _accel
from .errors import (
    AllCoincidentError,
    InvalidSpecError,
    PairNotInSurfaceError,
    SpecMismatchError,
    ZeroTotalWeightError,
)
from .weights import (
    _KERNEL_IDS,
    WeightVector,
    adaptive_k,
    as_coords,
    coords_all_coincident,
    validate_kernel,
    validate_proportion,
)

MODES = ("correlation", "partial_correlation")
METHODS = ("pearson", "spearman")

#: |rho| may exceed 1 by at most this much before the clamp is counted as a
#: diagnostic excursion (larger excursions still clamp).
CLAMP_NOISE = 1e-8


@dataclass(frozen=True)
class DataMatrix:
    """Immutable n-by-m table of finite observations.

    Rows are observations, columns are variables. Missing values must be
    resolved upstream (listwise completion); construction rejects NaN/inf.
    """

    values: np.ndarray
    variable_names: tuple

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64)
        names = tuple(str(v) for v in self.variable_names)
        if arr.ndim != 2:
            raise ValueError("values must be 2-D")
        n, m = arr.shape
        if m < 2:
            raise ValueError("need at least 2 variables")
        if n < 3:
            raise ValueError("need at least 3 observations")
        if len(names) != m:
            raise ValueError("variable_names length must match column count")
        if len(set(names)) != m:
            raise ValueError("variable names must be unique")
        if not np.all(np.isfinite(arr)):
            raise ValueError("values must be finite (no missing entries)")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "variable_names", names)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class AnalysisSpec:
    """Complete parameter bundle for one surface computation."""

    mode: str
    method: str
    var_a: str
    var_b: str
    controls: tuple = ()
    kernel: str = "bisquare"
    bandwidth_proportion: float = 0.25

    def __post_init__(self):
        object.__setattr__(self, "controls", tuple(self.controls))

    @property
    def variable_set(self) -> tuple:
        """Ordered analysis variables: the pair, then the controls."""
        return (self.var_a, self.var_b) + self.controls

    def validate(self, variable_names=None) -> "AnalysisSpec":
        """Check every invariant; optionally also that the names exist.

        Raises InvalidSpecError for violated invariants and
        SpecMismatchError for variables absent from ``variable_names``.
        """
        if self.mode not in MODES:
            raise InvalidSpecError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.method not in METHODS:
            raise InvalidSpecError(f"method must be one of {METHODS}, got {self.method!r}")
        try:
            validate_kernel(self.kernel)
            validate_proportion(self.bandwidth_proportion)
        except ValueError as err:
            raise InvalidSpecError(str(err)) from err
        if self.var_a == self.var_b:
            raise InvalidSpecError("var_a and var_b must differ")
        if len(set(self.controls)) != len(self.controls):
            raise InvalidSpecError("control variables must be unique")
        if {self.var_a, self.var_b} & set(self.controls):
            raise InvalidSpecError("controls must be disjoint from the analysis pair")
        if self.mode == "correlation" and self.controls:
            raise InvalidSpecError("correlation mode takes no control variables")
        if self.mode == "partial_correlation" and not self.controls:
            raise InvalidSpecError("partial correlation requires at least one control")
        if variable_names is not None:
            missing = [v for v in self.variable_set if v not in variable_names]
            if missing:
                raise SpecMismatchError(f"variables not in dataset: {missing}")
        return self


@dataclass(frozen=True)
class LocalResult:
    """Per-location slice of a surface: one value per variable pair."""

    location_index: int
    coefficients: np.ndarray
    p_values: np.ndarray
    valid: np.ndarray
    effective_n: float


@dataclass
class SignificanceMask:
    """Boolean mask of locations significant at a fixed alpha (or no mask)."""

    alpha: Optional[float]
    significant: np.ndarray


@dataclass
class GwSurface:
    """Coefficients, p-values, and validity for every location and pair."""

    coefficients: np.ndarray  # (n, n_pairs)
    p_values: np.ndarray  # (n, n_pairs)
    valid: np.ndarray  # (n, n_pairs) bool
    effective_n: np.ndarray  # (n,)
    spec: AnalysisSpec
    variable_set: tuple
    pairs: tuple  # tuple of (name_a, name_b)
    clamp_excursions: int = 0

    def __len__(self) -> int:
        return self.coefficients.shape[0]

    def pair_index(self, a: str, b: str) -> int:
        """Column index of an unordered pair; raises PairNotInSurfaceError."""
        for q, (pa, pb) in enumerate(self.pairs):
            if {pa, pb} == {a, b}:
                return q
        raise PairNotInSurfaceError(f"pair ({a}, {b}) not in surface pairs {self.pairs}")

    def local(self, i: int) -> LocalResult:
        return LocalResult(
            location_index=i,
            coefficients=self.coefficients[i],
            p_values=self.p_values[i],
            valid=self.valid[i],
            effective_n=float(self.effective_n[i]),
        )

    @property
    def per_location(self) -> Iterator[LocalResult]:
        return (self.local(i) for i in range(len(self)))


def rank_transform(x) -> np.ndarray:
    """1-based ranks with ties averaged, computed over the whole vector."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("expected a non-empty 1-D vector")
    return rankdata(arr, method="average").astype(np.float64)


def _extract_weights(w) -> np.ndarray:
    if isinstance(w, WeightVector):
        w = w.weights
    return np.ascontiguousarray(w, dtype=np.float64)


def weighted_covariance(values, w) -> np.ndarray:
    """Weighted covariance matrix about the weighted means.

    Weights are normalized to sum to one, so the result is invariant to
    rescaling the weight vector.
    """
    X = np.asfortranarray(values, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("values must be 2-D (observations x variables)")
    wv = _extract_weights(w)
    if wv.shape[0] != X.shape[0]:
        raise ValueError("weight length must match the observation count")
    if not np.sum(wv) > 0.0:
        raise ZeroTotalWeightError("weights sum to zero")
    S, _, _ = _accel.weighted_mean_cov(X, wv)
    return S


def _clamp_scalar(rho: float) -> float:
    if rho > 1.0:
        return 1.0
    if rho < -1.0:
        return -1.0
    return rho


def correlation_from_cov(S, a: int, b: int) -> float:
    """Correlation of variables ``a`` and ``b`` from a covariance matrix.

    Returns NaN (no-data) when either variance is degenerate: at or below
    1e-14 relative to the largest diagonal entry. Values leaking outside
    [-1, 1] through floating-point noise are clamped.
    """
    S = np.asarray(S, dtype=np.float64)
    tau = 1e-14 * float(np.max(np.diag(S)))
    va = S[a, a]
    vb = S[b, b]
    if not (va > tau and vb > tau):
        return float("nan")
    return _clamp_scalar(float(S[a, b] / np.sqrt(va * vb)))


def moore_penrose_pinv(A) -> np.ndarray:
    """Pseudo-inverse of a symmetric matrix via symmetric eigendecomposition.

    Eigenvalues with |lambda| <= m * |lambda|_max * machine epsilon are
    dropped; the result satisfies all four Penrose conditions to floating
    point accuracy.
    """
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix must be finite")
    return _accel.eigh_pinv(np.ascontiguousarray(A))


def partial_correlation_from_cov(S) -> np.ndarray:
    """Partial correlation matrix from a covariance over pair plus controls.

    The covariance is inverted directly when the Cholesky probe succeeds and
    through the pseudo-inverse otherwise. The diagonal is set to 1; entries
    whose precision diagonal is degenerate come back NaN. A 2x2 input
    reduces exactly to the plain correlation.
    """
    S = np.ascontiguousarray(S, dtype=np.float64)
    if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] < 2:
        raise ValueError("expected a square matrix of dimension >= 2")
    m = S.shape[0]
    vec = _accel.pcor_pairs_from_cov(S)
    out = np.eye(m)
    idx = 0
    for a in range(m):
        for b in range(a + 1, m):
            r = vec[idx]
            if np.isnan(r):
                out[a, b] = out[b, a] = np.nan
            else:
                out[a, b] = out[b, a] = _clamp_scalar(float(r))
            idx += 1
    return out


def _two_sided_t_p(rho: np.ndarray, df: np.ndarray) -> np.ndarray:
    """Two-sided p-values for H0: correlation == 0, vectorized.

    NaN where the coefficient is invalid or df < 1; exactly 0 where
    |rho| == 1; otherwise 2 * (1 - F_T(|t|; df)) with t = rho *
    sqrt(df / (1 - rho^2)) and possibly non-integer df.
    """
    rho = np.asarray(rho, dtype=np.float64)
    df = np.broadcast_to(np.asarray(df, dtype=np.float64), rho.shape)
    p = np.full(rho.shape, np.nan)
    ok = np.isfinite(rho) & (df >= 1.0)
    unit = ok & (np.abs(rho) >= 1.0)
    p[unit] = 0.0
    mid = ok & ~unit
    if np.any(mid):
        r = rho[mid]
        v = df[mid]
        t = r * np.sqrt(v / (1.0 - r * r))
        p[mid] = 2.0 * stdtr(v, -np.abs(t))
    return p


def local_p_value(rho: float, w, g: int = 0) -> float:
    """p-value of one local coefficient under the local t-test.

    Effective sample size is (sum w)^2 / sum(w^2); degrees of freedom are
    that minus 2 minus the control count ``g``. Returns NaN when df < 1 or
    the coefficient is invalid.
    """
    if np.isfinite(rho) and abs(rho) > 1.0:
        raise ValueError(f"|rho| must be <= 1, got {rho}")
    wv = _extract_weights(w)
    sw = float(np.sum(wv))
    sw2 = float(np.sum(wv * wv))
    if sw2 <= 0.0:
        return float("nan")
    neff = sw * sw / sw2
    df = neff - 2.0 - g
    return float(_two_sided_t_p(np.asarray([rho]), np.asarray([df]))[0])


def _pair_names(variable_set) -> tuple:
    names = []
    m = len(variable_set)
    for a in range(m):
        for b in range(a + 1, m):
            names.append((variable_set[a], variable_set[b]))
    return tuple(names)


def compute_surface(data: DataMatrix, coords, spec: AnalysisSpec) -> GwSurface:
    """Full surface: one coefficient and p-value per location and pair.

    Spearman analyses rank each analysis variable once, globally, before any
    weighting. The computation fans out over locations; each location is a
    fixed-order arithmetic sequence, so results do not depend on scheduling
    or worker count.
    """
    spec.validate(data.variable_names)
    coords = as_coords(coords)
    n = data.n
    if coords.shape[0] != n:
        raise ValueError("coordinate count must match the observation count")
    if coords_all_coincident(coords):
        raise AllCoincidentError("all observations share one coordinate")

    names = spec.variable_set
    cols = [data.variable_names.index(v) for v in names]
    X = np.asfortranarray(data.values[:, cols], dtype=np.float64)
    if spec.method == "spearman":
        ranked = np.empty_like(X, order="F")
        for c in range(X.shape[1]):
            ranked[:, c] = rank_transform(X[:, c])
        X = ranked

    partial = spec.mode == "partial_correlation"
    cx = np.ascontiguousarray(coords[:, 0])
    cy = np.ascontiguousarray(coords[:, 1])
    k = adaptive_k(n, spec.bandwidth_proportion)
    coef, neff, _ = _accel.surface_core(cx, cy, X, _KERNEL_IDS[spec.kernel], k, partial)

    over = np.abs(coef) > 1.0  # NaN compares False
    excursions = int(np.count_nonzero(np.abs(coef) > 1.0 + CLAMP_NOISE))
    coef = np.where(over, np.sign(coef), coef)

    g = len(spec.controls) if partial else 0
    df = neff - 2.0 - g
    p = _two_sided_t_p(coef, df[:, None])
    valid = ~np.isnan(coef)

    return GwSurface(
        coefficients=coef,
        p_values=p,
        valid=valid,
        effective_n=neff,
        spec=spec,
        variable_set=names,
        pairs=_pair_names(names),
        clamp_excursions=excursions,
    )


def apply_significance_mask(surface: GwSurface, pair, alpha: float) -> SignificanceMask:
    """Locations whose displayed pair is significant at ``alpha``.

    The comparison is inclusive (p <= alpha); invalid cells are never
    significant. ``alpha`` must be 0.01 or 0.05.
    """
    if alpha not in (0.01, 0.05):
        raise InvalidSpecError(f"alpha must be 0.01 or 0.05, got {alpha}")
    q = surface.pair_index(pair[0], pair[1])
    p = surface.p_values[:, q]
    ok = surface.valid[:, q]
    with np.errstate(invalid="ignore"):
        sig = ok & (p <= alpha)
    return SignificanceMask(alpha=alpha, significant=sig)


def surface_summary(surface: GwSurface, displayed_pair, n_dropped: int = 0,
                    wall_ms: Optional[float] = None) -> dict:
    """Compact descriptive summary used by both the CLI and the service."""
    q = surface.pair_index(displayed_pair[0], displayed_pair[1])
    ok = surface.valid[:, q]
    coefs = surface.coefficients[ok, q]
    sig001 = apply_significance_mask(surface, displayed_pair, 0.01).significant
    sig005 = apply_significance_mask(surface, displayed_pair, 0.05).significant
    spec = surface.spec
    return {
        "spec": {
            "mode": spec.mode,
            "method": spec.method,
            "var_a": spec.var_a,
            "var_b": spec.var_b,
            "controls": list(spec.controls),
            "kernel": spec.kernel,
            "bandwidth_proportion": spec.bandwidth_proportion,
            "displayed_pair": list(displayed_pair),
        },
        "n_used": int(len(surface)),
        "n_dropped": int(n_dropped),
        "coef_min": float(coefs.min()) if coefs.size else None,
        "coef_max": float(coefs.max()) if coefs.size else None,
        "coef_mean": float(coefs.mean()) if coefs.size else None,
        "significant_at_001": int(np.count_nonzero(sig001)),
        "significant_at_005": int(np.count_nonzero(sig005)),
        "clamp_excursions": int(surface.clamp_excursions),
        "wall_ms": None if wall_ms is None else float(wall_ms),
    }

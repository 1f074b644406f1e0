"""Hot numeric kernels shared by the weights and engine modules.

Everything here is compiled with numba when it is installed and runs as
plain (slow) Python otherwise, so the package stays importable either way.
Each location is an independent, fixed-order computation: surfaces come out
bit-identical no matter how many threads execute the outer loop.
"""

import numpy as np

try:
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - this environment ships numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap

    prange = range

# Kernel identifiers; order matches weights.KERNELS.
GAUSSIAN = 0
EXPONENTIAL = 1
BOXCAR = 2
BISQUARE = 3
TRICUBE = 4

# float64 machine epsilon, hard coded because np.finfo is unavailable in
# nopython mode.
_EPS = 2.220446049250313e-16


@njit(cache=True)
def _distances_into(i, cx, cy, d):
    for j in range(cx.shape[0]):
        dx = cx[j] - cx[i]
        dy = cy[j] - cy[i]
        d[j] = np.sqrt(dx * dx + dy * dy)


@njit(cache=True)
def distances_from(i, cx, cy):
    """Euclidean distances from point ``i`` to every point (including itself)."""
    d = np.empty(cx.shape[0])
    _distances_into(i, cx, cy, d)
    return d


@njit(cache=True)
def _kth_smallest_inplace(a, kth):
    """Value of order statistic ``kth`` (0-based); reorders ``a`` in place."""
    lo = 0
    hi = a.shape[0] - 1
    while lo < hi:
        # median-of-three pivot
        mid = (lo + hi) // 2
        if a[mid] < a[lo]:
            a[mid], a[lo] = a[lo], a[mid]
        if a[hi] < a[lo]:
            a[hi], a[lo] = a[lo], a[hi]
        if a[hi] < a[mid]:
            a[hi], a[mid] = a[mid], a[hi]
        pivot = a[mid]
        i = lo
        j = hi
        while i <= j:
            while a[i] < pivot:
                i += 1
            while a[j] > pivot:
                j -= 1
            if i <= j:
                a[i], a[j] = a[j], a[i]
                i += 1
                j -= 1
        if kth <= j:
            hi = j
        elif kth >= i:
            lo = i
        else:
            return a[kth]
    return a[lo]


@njit(cache=True)
def _smallest_positive(d):
    best = -1.0
    for j in range(d.shape[0]):
        v = d[j]
        if v > 0.0 and (best < 0.0 or v < best):
            best = v
    return best


@njit(cache=True)
def bandwidth_from_distances(d, k):
    """k-th smallest distance, counting the focal self-distance as the first.

    A zero k-th distance (coincident coordinates) falls back to the smallest
    strictly positive distance. Returns -1.0 when no positive distance
    exists; callers reject that case up front.
    """
    b = np.partition(d, k - 1)[k - 1]
    if b <= 0.0:
        b = _smallest_positive(d)
    return b


@njit(cache=True)
def _kernel_weights_into(kind, d, b, w):
    n = d.shape[0]
    if kind == GAUSSIAN:
        for j in range(n):
            z = d[j] / b
            w[j] = np.exp(-0.5 * z * z)
    elif kind == EXPONENTIAL:
        for j in range(n):
            w[j] = np.exp(-d[j] / b)
    elif kind == BOXCAR:
        for j in range(n):
            w[j] = 1.0 if d[j] < b else 0.0
    elif kind == BISQUARE:
        for j in range(n):
            if d[j] < b:
                z = d[j] / b
                u = 1.0 - z * z
                w[j] = u * u
            else:
                w[j] = 0.0
    else:  # TRICUBE
        for j in range(n):
            if d[j] < b:
                z = d[j] / b
                u = 1.0 - z * z * z
                w[j] = u * u * u
            else:
                w[j] = 0.0


@njit(cache=True)
def kernel_weights(kind, d, b):
    """Evaluate one of the five kernels over a distance vector.

    Compact kernels (boxcar, bisquare, tricube) use the strict ``d < b``
    cutoff, so a point exactly at the bandwidth gets weight zero.
    """
    w = np.empty(d.shape[0])
    _kernel_weights_into(kind, d, b, w)
    return w


@njit(cache=True)
def _wcov_fill(X, w, mu, S):
    """Weighted means and covariance about them, written into mu and S.

    Weights are normalized by their sum inside the computation. Returns
    ``(sum_w, sum_w_sq)`` for effective-sample-size bookkeeping.
    """
    n, m = X.shape
    sw = 0.0
    sw2 = 0.0
    for j in range(n):
        sw += w[j]
        sw2 += w[j] * w[j]
    for c in range(m):
        acc = 0.0
        for j in range(n):
            acc += w[j] * X[j, c]
        mu[c] = acc / sw
    for a in range(m):
        for b in range(a, m):
            acc = 0.0
            for j in range(n):
                # deviations multiply first so swapping a and b is exact
                acc += w[j] * ((X[j, a] - mu[a]) * (X[j, b] - mu[b]))
            v = acc / sw
            S[a, b] = v
            S[b, a] = v
    return sw, sw2


@njit(cache=True)
def weighted_mean_cov(X, w):
    """Weighted covariance about the weighted means.

    Returns ``(S, sum_w, sum_w_sq)`` so callers can derive the effective
    sample size without a second pass.
    """
    m = X.shape[1]
    mu = np.empty(m)
    S = np.empty((m, m))
    sw, sw2 = _wcov_fill(X, w, mu, S)
    return S, sw, sw2


@njit(cache=True)
def chol_inverse(S):
    """Invert a symmetric matrix through its Cholesky factor.

    Returns ``(ok, C)`` where ``ok`` is False when the matrix is not
    numerically positive definite (a non-positive pivot appeared).
    """
    m = S.shape[0]
    L = np.zeros((m, m))
    for c in range(m):
        acc = S[c, c]
        for k in range(c):
            acc -= L[c, k] * L[c, k]
        if acc <= 0.0 or not np.isfinite(acc):
            return False, L
        L[c, c] = np.sqrt(acc)
        for r in range(c + 1, m):
            acc2 = S[r, c]
            for k in range(c):
                acc2 -= L[r, k] * L[c, k]
            L[r, c] = acc2 / L[c, c]
    # Invert the triangular factor, then assemble C = L^-T L^-1.
    Li = np.zeros((m, m))
    for c in range(m):
        Li[c, c] = 1.0 / L[c, c]
        for r in range(c + 1, m):
            acc3 = 0.0
            for k in range(c, r):
                acc3 += L[r, k] * Li[k, c]
            Li[r, c] = -acc3 / L[r, r]
    C = np.empty((m, m))
    for a in range(m):
        for b in range(a, m):
            acc4 = 0.0
            for k in range(m):
                acc4 += Li[k, a] * Li[k, b]
            C[a, b] = acc4
            C[b, a] = acc4
    return True, C


@njit(cache=True)
def eigh_pinv(A):
    """Moore-Penrose pseudo-inverse of a symmetric matrix via eigendecomposition.

    Eigenvalues with magnitude at or below ``m * |lambda|_max * eps`` are
    treated as zero.
    """
    m = A.shape[0]
    vals, vecs = np.linalg.eigh(A)
    lmax = 0.0
    for k in range(m):
        av = abs(vals[k])
        if av > lmax:
            lmax = av
    tol = m * lmax * _EPS
    inv_vals = np.zeros(m)
    for k in range(m):
        if abs(vals[k]) > tol:
            inv_vals[k] = 1.0 / vals[k]
    P = np.empty((m, m))
    for a in range(m):
        for b in range(a, m):
            acc = 0.0
            for k in range(m):
                acc += vecs[a, k] * inv_vals[k] * vecs[b, k]
            P[a, b] = acc
            P[b, a] = acc
    return P


@njit(cache=True)
def corr_pairs_from_cov(S):
    """Plain correlations for every unordered pair, NaN where variance degenerates.

    The validity cutoff is 1e-14 relative to the largest diagonal entry.
    """
    m = S.shape[0]
    npairs = m * (m - 1) // 2
    rho = np.full(npairs, np.nan)
    dmax = S[0, 0]
    for c in range(1, m):
        if S[c, c] > dmax:
            dmax = S[c, c]
    tau = 1e-14 * dmax
    idx = 0
    for a in range(m):
        for b in range(a + 1, m):
            va = S[a, a]
            vb = S[b, b]
            if va > tau and vb > tau:
                rho[idx] = S[a, b] / np.sqrt(va * vb)
            idx += 1
    return rho


@njit(cache=True)
def pcor_pairs_from_cov(S):
    """Partial correlations for every unordered pair from one matrix inversion.

    Positive definiteness is probed by Cholesky success; on failure the
    pseudo-inverse takes over. A 2x2 input reduces to the plain correlation.
    """
    m = S.shape[0]
    if m == 2:
        return corr_pairs_from_cov(S)
    ok, C = chol_inverse(S)
    if not ok:
        C = eigh_pinv(S)
    npairs = m * (m - 1) // 2
    rho = np.full(npairs, np.nan)
    dmax = C[0, 0]
    for c in range(1, m):
        if C[c, c] > dmax:
            dmax = C[c, c]
    tau = 1e-14 * dmax
    idx = 0
    for a in range(m):
        for b in range(a + 1, m):
            ca = C[a, a]
            cb = C[b, b]
            if ca > tau and cb > tau:
                rho[idx] = -C[a, b] / np.sqrt(ca * cb)
            idx += 1
    return rho


@njit(cache=True, parallel=True)
def surface_core(cx, cy, X, kernel_kind, k, partial_mode):
    """Per-location coefficient sweep: weights, local covariance, (p)corr.

    Returns raw (unclamped) coefficients for all variable pairs, the Kish
    effective sample size, and the effective bandwidth per location. The
    location range is processed in chunks that reuse O(n) scratch buffers,
    so the n-by-n weight matrix is never materialized and peak auxiliary
    memory per worker stays O(n + m^2). Chunking cannot change any value:
    every location's arithmetic is self-contained and fixed-order.
    """
    n = cx.shape[0]
    m = X.shape[1]
    npairs = m * (m - 1) // 2
    coef = np.full((n, npairs), np.nan)
    neff = np.empty(n)
    bws = np.empty(n)
    nchunks = 64 if n >= 64 else n
    for c in prange(nchunks):
        start = (c * n) // nchunks
        end = ((c + 1) * n) // nchunks
        d = np.empty(n)
        scratch = np.empty(n)
        w = np.empty(n)
        mu = np.empty(m)
        S = np.empty((m, m))
        for i in range(start, end):
            _distances_into(i, cx, cy, d)
            scratch[:] = d
            b = _kth_smallest_inplace(scratch, k - 1)
            if b <= 0.0:
                b = _smallest_positive(d)
            _kernel_weights_into(kernel_kind, d, b, w)
            sw, sw2 = _wcov_fill(X, w, mu, S)
            neff[i] = sw * sw / sw2
            bws[i] = b
            if partial_mode:
                rho = pcor_pairs_from_cov(S)
            else:
                rho = corr_pairs_from_cov(S)
            for q in range(npairs):
                coef[i, q] = rho[q]
    return coef, neff, bws

"""Straight-line reference implementation used by the equivalence tests.

Everything here is deliberately naive and independent of the package's hot
path: the full n-by-n weight matrix is materialized, bandwidths come from a
full sort, ranks from an O(n^2) counting rule, matrix inversion from
numpy.linalg, and p-values from the regularized incomplete beta function.
"""

import math

import numpy as np
from scipy.spatial.distance import cdist
from scipy.special import betainc


def kernel_row(kind, d, b):
    z = d / b
    if kind == "gaussian":
        return np.exp(-0.5 * z**2)
    if kind == "exponential":
        return np.exp(-z)
    if kind == "boxcar":
        return np.where(d < b, 1.0, 0.0)
    if kind == "bisquare":
        return np.where(d < b, (1.0 - z**2) ** 2, 0.0)
    if kind == "tricube":
        return np.where(d < b, (1.0 - z**3) ** 3, 0.0)
    raise ValueError(kind)


def full_weight_matrix(coords, kind, proportion):
    """Materialized n-by-n weight matrix with per-row adaptive bandwidths."""
    coords = np.asarray(coords, dtype=float)
    n = coords.shape[0]
    D = cdist(coords, coords)
    k = max(2, math.ceil(proportion * n - 1e-12))
    W = np.zeros((n, n))
    bws = np.zeros(n)
    for i in range(n):
        row = np.sort(D[i])
        b = row[k - 1]
        if b <= 0.0:
            b = row[row > 0.0][0]
        bws[i] = b
        W[i] = kernel_row(kind, D[i], b)
    return W, bws


def counting_rank(x):
    """1-based average ranks by explicit counting: 1 + #smaller + (#equal-1)/2."""
    x = np.asarray(x, dtype=float)
    out = np.empty(x.size)
    for i, v in enumerate(x):
        out[i] = 1.0 + np.sum(x < v) + (np.sum(x == v) - 1) / 2.0
    return out


def sym_eig_pinv(A):
    """Pseudo-inverse by symmetric eigendecomposition, same cutoff rule."""
    vals, vecs = np.linalg.eigh(A)
    m = A.shape[0]
    tol = m * np.max(np.abs(vals)) * np.finfo(float).eps
    inv_vals = np.where(np.abs(vals) > tol, 1.0 / vals, 0.0)
    return (vecs * inv_vals) @ vecs.T


def make_random_psd(rng):
    """Random symmetric PSD with a controlled spectrum, often rank-deficient.

    Eigenvalues are either exactly zero or well away from the truncation
    cutoff, so the four Penrose conditions are verifiable in float64 (a
    near-singular kept eigenvalue would swamp the check with epsilon * kappa
    rounding noise regardless of how exact the pseudo-inverse is).
    """
    m = int(rng.integers(2, 7))
    r = int(rng.integers(0, m + 1))
    Q, _ = np.linalg.qr(rng.normal(size=(m, m)))
    vals = np.zeros(m)
    vals[:r] = rng.uniform(0.01, 10.0, size=r)
    return (Q * vals) @ Q.T


def t_test_p(rho, df):
    """Two-sided p through the incomplete beta route."""
    if not np.isfinite(rho) or df < 1.0:
        return float("nan")
    if abs(rho) >= 1.0:
        return 0.0
    t = abs(rho) * math.sqrt(df / (1.0 - rho * rho))
    return float(betainc(df / 2.0, 0.5, df / (df + t * t)))


def naive_surface(coords, X, kind, proportion, method, mode):
    """Reference surface over all variable pairs of the given columns.

    Returns (coef, pvals, neff) with NaN no-data cells, matching the
    engine's contracts but sharing none of its code path.
    """
    X = np.asarray(X, dtype=float)
    n, m = X.shape
    if method == "spearman":
        X = np.column_stack([counting_rank(X[:, c]) for c in range(m)])
    W, _ = full_weight_matrix(coords, kind, proportion)
    npairs = m * (m - 1) // 2
    g = m - 2 if mode == "partial_correlation" else 0
    coef = np.full((n, npairs), np.nan)
    pvals = np.full((n, npairs), np.nan)
    neff = np.zeros(n)
    for i in range(n):
        wraw = W[i]
        w = wraw / wraw.sum()
        mu = w @ X
        Xc = X - mu
        S = Xc.T @ (Xc * w[:, None])
        neff[i] = wraw.sum() ** 2 / np.sum(wraw**2)
        df = neff[i] - 2.0 - g
        if mode == "partial_correlation" and m > 2:
            try:
                np.linalg.cholesky(S)
                C = np.linalg.inv(S)
            except np.linalg.LinAlgError:
                C = sym_eig_pinv(S)
            tau = 1e-14 * np.max(np.diag(C))
            q = 0
            for a in range(m):
                for b in range(a + 1, m):
                    if C[a, a] > tau and C[b, b] > tau:
                        r = -C[a, b] / math.sqrt(C[a, a] * C[b, b])
                        r = min(1.0, max(-1.0, r))
                        coef[i, q] = r
                        pvals[i, q] = t_test_p(r, df)
                    q += 1
        else:
            tau = 1e-14 * np.max(np.diag(S))
            q = 0
            for a in range(m):
                for b in range(a + 1, m):
                    if S[a, a] > tau and S[b, b] > tau:
                        r = S[a, b] / math.sqrt(S[a, a] * S[b, b])
                        r = min(1.0, max(-1.0, r))
                        coef[i, q] = r
                        pvals[i, q] = t_test_p(r, df)
                    q += 1
    return coef, pvals, neff

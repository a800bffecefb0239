"""Outlier detectors over numerical attribute combinations.

All per-point detectors return one nonnegative score per row, higher =
more anomalous.  Multivariate detectors standardize columns internally
where the algorithm is scale-sensitive.
"""
from __future__ import annotations

from typing import List, Optional

import numpy as np
from sklearn.cluster import DBSCAN, KMeans
from sklearn.ensemble import IsolationForest
from sklearn.neighbors import NearestNeighbors


class MethodError(ValueError):
    """Raised when a detector's preconditions are violated."""


def _standardize(cols: List[np.ndarray]) -> np.ndarray:
    X = np.column_stack(cols).astype(float)
    mu = X.mean(axis=0)
    sd = X.std(axis=0)
    sd[sd == 0] = 1.0
    return (X - mu) / sd


def iqr_outlier_scores(x: np.ndarray) -> np.ndarray:
    """Distance beyond the Tukey fences, in IQR units; 0 inside the fences."""
    x = np.asarray(x, dtype=float)
    if len(x) < 4:
        raise MethodError("need >= 4 rows")
    q1, q3 = np.percentile(x, [25, 75])  # linear interpolation
    iqr = q3 - q1
    if iqr == 0:
        return np.zeros_like(x)
    lo, hi = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    return np.maximum(0.0, np.maximum(lo - x, x - hi)) / iqr


def zscore_outlier_scores(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if len(x) < 8:
        raise MethodError("need >= 8 rows")
    sd = x.std()
    if sd == 0:
        return np.zeros_like(x)
    return np.abs(x - x.mean()) / sd


def _kdist_eps(X: np.ndarray, k: int) -> float:
    """k-distance heuristic: a high quantile of the k-NN distance curve."""
    nn = NearestNeighbors(n_neighbors=min(k + 1, len(X)))
    nn.fit(X)
    dists, _ = nn.kneighbors(X)
    kdist = dists[:, -1]
    # generous quantile so only clear stragglers fall outside a cluster
    eps = 1.5 * float(np.percentile(kdist, 95))
    return eps if eps > 0 else 1.0


def dbscan_outlier_scores(
    cols: List[np.ndarray], eps: Optional[float] = None, min_pts: int = 5
) -> np.ndarray:
    """Noise points score distance-to-nearest-core / eps; members score 0."""
    if min_pts < 2:
        raise MethodError("min_pts must be >= 2")
    X = _standardize(cols)
    n = len(X)
    if n < 8:
        raise MethodError("need >= 8 rows")
    if eps is None:
        eps = _kdist_eps(X, min_pts)
    if eps <= 0:
        raise MethodError("eps must be > 0")
    labels = DBSCAN(eps=eps, min_samples=min_pts).fit(X)
    core = labels.components_
    scores = np.zeros(n)
    noise = labels.labels_ == -1
    if len(core) == 0:
        # no core points at all: fall back to a k-NN distance score
        nn = NearestNeighbors(n_neighbors=min(min_pts + 1, n)).fit(X)
        d, _ = nn.kneighbors(X)
        return d[:, -1]
    if noise.any():
        nn = NearestNeighbors(n_neighbors=1).fit(core)
        d, _ = nn.kneighbors(X[noise])
        scores[noise] = d[:, 0] / eps
    return scores


def isolation_forest_scores(
    cols: List[np.ndarray], n_trees: int = 100, subsample: int = 256, seed: int = 0
) -> np.ndarray:
    """Isolation forest anomaly score s(x) = 2^(-E[path]/c(n)) in (0, 1)."""
    if n_trees < 2:
        raise MethodError("n_trees must be >= 2")
    X = np.column_stack(cols).astype(float)
    if len(X) < 8:
        raise MethodError("need >= 8 rows")
    clf = IsolationForest(
        n_estimators=n_trees,
        max_samples=min(subsample, len(X)),
        random_state=seed,
    ).fit(X)
    # sklearn's score_samples returns the negated anomaly score
    return -clf.score_samples(X)


def mahalanobis_scores(cols: List[np.ndarray]) -> np.ndarray:
    """Squared Mahalanobis distance to the mean, ridge-regularized.

    Columns are standardized first so the score is exactly invariant under
    positive affine rescaling of any column (the ridge would otherwise break
    the algebraic invariance of the plain Mahalanobis distance).
    """
    Z = _standardize(cols)
    n, d = Z.shape
    if n < 8:
        raise MethodError("need >= 8 rows")
    cov = np.cov(Z, rowvar=False).reshape(d, d)
    ridge = 1e-6 * np.trace(cov) / d
    if ridge <= 0:
        ridge = 1e-6
    cov = cov + ridge * np.eye(d)
    diff = Z - Z.mean(axis=0)
    sol = np.linalg.solve(cov, diff.T)
    return np.einsum("ij,ji->i", diff, sol)


def kmeans_distance_scores(cols: List[np.ndarray], k: int = 3, seed: int = 0) -> np.ndarray:
    """Distance to the assigned centroid after k-means on standardized data."""
    X = _standardize(cols)
    n = len(X)
    if n < 8:
        raise MethodError("need >= 8 rows")
    if k < 1 or k >= n:
        raise MethodError("k must satisfy 1 <= k < n")
    km = KMeans(n_clusters=k, init="k-means++", n_init=1, max_iter=50, random_state=seed)
    labels = km.fit_predict(X)
    return np.linalg.norm(X - km.cluster_centers_[labels], axis=1)


def _gram(kernel: str, X: np.ndarray, Y: np.ndarray, gamma: float, degree: int) -> np.ndarray:
    if kernel == "linear":
        return X @ Y.T
    if kernel == "rbf":
        sq = ((X[:, None, :] - Y[None, :, :]) ** 2).sum(axis=2)
        return np.exp(-gamma * sq)
    if kernel == "polynomial":
        return (X @ Y.T + 1.0) ** degree
    raise MethodError(f"unknown kernel {kernel!r}")


def kernel_mean_distance_scores(
    cols: List[np.ndarray],
    kernel: str = "rbf",
    gamma: Optional[float] = None,
    degree: int = 3,
) -> np.ndarray:
    """Squared distance of each point's kernel feature to the kernel mean:
    d(x)^2 = k(x,x) - (2/n) sum_j k(x,x_j) + (1/n^2) sum_ij k(x_i,x_j).
    """
    X = _standardize(cols)
    n = len(X)
    if n < 8:
        raise MethodError("need >= 8 rows")
    if gamma is None:
        gamma = 1.0 / X.shape[1]
    K = _gram(kernel, X, X, gamma, degree)
    diag = np.diag(K)
    return diag - 2.0 * K.mean(axis=1) + K.mean()

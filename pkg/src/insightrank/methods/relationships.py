"""Association detectors: correlations, mutual information, contingency
analysis and group differences.
"""
from __future__ import annotations

from typing import List, Tuple

import numpy as np
from scipy import stats

from .outliers import MethodError


def pearson_correlation(x: np.ndarray, y: np.ndarray) -> float:
    """|r| for a numerical pair."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    if x.std() == 0 or y.std() == 0:
        raise MethodError("zero variance")
    return float(abs(np.corrcoef(x, y)[0, 1]))


def spearman_correlation(x: np.ndarray, y: np.ndarray) -> float:
    """|rho| on average-tied ranks."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    rx = stats.rankdata(x)  # average ranks
    ry = stats.rankdata(y)
    if rx.std() == 0 or ry.std() == 0:
        raise MethodError("zero variance")
    return float(abs(np.corrcoef(rx, ry)[0, 1]))


def _discretize(values: np.ndarray, is_categorical: bool, bins: int) -> np.ndarray:
    if is_categorical:
        return values.astype(np.int64)
    v = np.asarray(values, float)
    lo, hi = v.min(), v.max()
    if hi == lo:
        return np.zeros(len(v), dtype=np.int64)
    edges = lo + (hi - lo) * np.arange(1, bins) / bins
    return np.digitize(v, edges)


def _entropy(counts: np.ndarray) -> float:
    p = counts[counts > 0] / counts.sum()
    return float(-(p * np.log(p)).sum())


def mutual_information(
    x: np.ndarray,
    y: np.ndarray,
    x_categorical: bool = False,
    y_categorical: bool = False,
    bins: int = 10,
) -> float:
    """Plug-in MI with equal-width binning for numerical axes, normalized
    to [0, 1] by min(H(X), H(Y)); 0 when either entropy is 0.
    """
    if bins < 2:
        raise MethodError("bins must be >= 2")
    xd = _discretize(np.asarray(x), x_categorical, bins)
    yd = _discretize(np.asarray(y), y_categorical, bins)
    nx, ny = xd.max() + 1, yd.max() + 1
    joint = np.zeros((nx, ny))
    np.add.at(joint, (xd, yd), 1.0)
    hx = _entropy(joint.sum(axis=1))
    hy = _entropy(joint.sum(axis=0))
    if hx == 0 or hy == 0:
        return 0.0
    hxy = _entropy(joint.ravel())
    mi = hx + hy - hxy
    return float(min(1.0, max(0.0, mi / min(hx, hy))))


def _contingency(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    x = x.astype(np.int64)
    y = y.astype(np.int64)
    table = np.zeros((x.max() + 1, y.max() + 1))
    np.add.at(table, (x, y), 1.0)
    # drop empty rows/cols (unobserved category ids)
    table = table[table.sum(axis=1) > 0][:, table.sum(axis=0) > 0]
    return table


def cramers_v(x: np.ndarray, y: np.ndarray) -> float:
    """Bias-corrected Cramer's V on the category-code contingency table."""
    table = _contingency(x, y)
    r, c = table.shape
    if r < 2 or c < 2:
        raise MethodError("degenerate contingency")
    n = table.sum()
    chi2 = stats.chi2_contingency(table, correction=False)[0]
    phi2 = chi2 / n
    phi2_corr = max(0.0, phi2 - (r - 1) * (c - 1) / (n - 1))
    r_corr = r - (r - 1) ** 2 / (n - 1)
    c_corr = c - (c - 1) ** 2 / (n - 1)
    denom = min(r_corr, c_corr) - 1
    if denom <= 0:
        return 0.0
    return float(min(1.0, np.sqrt(phi2_corr / denom)))


def chisq_residual_outliers(
    x: np.ndarray, y: np.ndarray, threshold: float = 2.0
) -> Tuple[np.ndarray, np.ndarray, List[Tuple[int, int, float]]]:
    """Standardized Pearson residuals of the C x C contingency table.

    Returns (row_ids, scores, flagged_cells): member rows of cells with
    |residual| > threshold, scored by |residual|; cells with expected count
    0 (or a degenerate margin) are skipped.
    """
    x = x.astype(np.int64)
    y = y.astype(np.int64)
    nx, ny = x.max() + 1, y.max() + 1
    table = np.zeros((nx, ny))
    np.add.at(table, (x, y), 1.0)
    n = table.sum()
    row_m = table.sum(axis=1)
    col_m = table.sum(axis=0)
    flagged: List[Tuple[int, int, float]] = []
    for i in range(nx):
        for j in range(ny):
            exp = row_m[i] * col_m[j] / n
            adj = (1 - row_m[i] / n) * (1 - col_m[j] / n)
            if exp == 0 or adj <= 0:
                continue
            resid = (table[i, j] - exp) / np.sqrt(exp * adj)
            if abs(resid) > threshold:
                flagged.append((i, j, float(resid)))
    if not flagged:
        return np.array([], dtype=np.int64), np.array([]), []
    row_ids: List[int] = []
    scores: List[float] = []
    for i, j, resid in flagged:
        members = np.flatnonzero((x == i) & (y == j))
        row_ids.extend(members.tolist())
        scores.extend([abs(resid)] * len(members))
    return np.array(row_ids, dtype=np.int64), np.array(scores), flagged


def group_difference_score(
    groups: np.ndarray, values: np.ndarray
) -> Tuple[float, dict]:
    """Kruskal-Wallis H across category groups; score = 1 - p-value.

    Groups with fewer than 2 rows are excluded; fewer than 2 groups left is
    an error.
    """
    groups = groups.astype(np.int64)
    values = np.asarray(values, float)
    samples = []
    for g in np.unique(groups):
        vals = values[groups == g]
        if len(vals) >= 2:
            samples.append(vals)
    if len(samples) < 2:
        raise MethodError("need >= 2 groups with >= 2 rows")
    try:
        h, p = stats.kruskal(*samples)
    except ValueError:
        # all values identical across groups
        return 0.0, {"h_statistic": 0.0, "p_value": 1.0}
    return float(1.0 - p), {"h_statistic": float(h), "p_value": float(p)}

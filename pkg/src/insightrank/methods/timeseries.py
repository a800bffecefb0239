"""Time-series detectors: trend, spikes, seasonality and causality.

Every function expects the series already restricted to missing-free rows;
rows are sorted by timestamp internally and scores are returned in the
original row order.
"""
from __future__ import annotations

from typing import Dict, Optional, Tuple

import numpy as np
from scipy import stats

from .outliers import MethodError


def _time_order(t: np.ndarray) -> np.ndarray:
    return np.argsort(t, kind="stable")


def trend_score(t: np.ndarray, x: np.ndarray) -> Tuple[float, Dict[str, float]]:
    """OLS of value on time; returns (R^2, {slope, intercept})."""
    t = np.asarray(t, float)
    x = np.asarray(x, float)
    if len(t) < 3:
        raise MethodError("need >= 3 rows")
    if x.std() == 0 or t.std() == 0:
        raise MethodError("zero variance")
    slope, intercept = np.polyfit(t, x, 1)
    r = np.corrcoef(t, x)[0, 1]
    return float(r * r), {"slope": float(slope), "intercept": float(intercept)}


def mann_kendall_score(t: np.ndarray, x: np.ndarray) -> Tuple[float, Dict[str, float]]:
    """|tau| where tau = S / (n(n-1)/2), S the Mann-Kendall statistic."""
    t = np.asarray(t, float)
    x = np.asarray(x, float)
    n = len(x)
    if n < 8:
        raise MethodError("need >= 8 rows")
    y = x[_time_order(t)]
    n0 = n * (n - 1) / 2
    # recover S from scipy's tau-b (time index has no ties)
    _, counts = np.unique(y, return_counts=True)
    n1 = float((counts * (counts - 1) / 2).sum())
    if n1 == n0:
        return 0.0, {"tau": 0.0}  # constant series
    tau_b = stats.kendalltau(np.arange(n), y).statistic
    s = tau_b * np.sqrt(n0 * (n0 - n1))
    tau = s / n0
    return float(abs(tau)), {"tau": float(tau)}


def _rolling_median(values: np.ndarray, window: int) -> np.ndarray:
    half = window // 2
    n = len(values)
    out = np.empty(n)
    for i in range(n):
        out[i] = np.median(values[max(0, i - half): i + half + 1])
    return out


def rolling_residual_outlier_scores(
    t: np.ndarray,
    x: np.ndarray,
    groups: Optional[np.ndarray] = None,
    window: int = 7,
) -> np.ndarray:
    """Robust z of the residual vs. a centered rolling median.

    score = |residual| / (1.4826 * rolling MAD of residuals); points whose
    local MAD is zero fall back to the series-level scale so isolated spikes
    in an otherwise flat series still score (zero residual scores zero).
    Edge points without a full window score 0.  With `groups`, the series is
    processed per category.
    """
    if window < 3:
        raise MethodError("window must be >= 3")
    t = np.asarray(t, float)
    x = np.asarray(x, float)
    n = len(x)
    if n < 8:
        raise MethodError("need >= 8 rows")
    scores = np.zeros(n)
    if groups is None:
        group_ids = [np.arange(n)]
    else:
        groups = np.asarray(groups)
        group_ids = [np.flatnonzero(groups == g) for g in np.unique(groups)]
    half = window // 2
    for ids in group_ids:
        if len(ids) < window:
            continue
        order = ids[_time_order(t[ids])]
        y = x[order]
        med = _rolling_median(y, window)
        resid = y - med
        mad = _rolling_median(np.abs(resid), window)
        scale = 1.4826 * mad
        # fallback scale for flat windows around a spike
        global_mad = float(np.median(np.abs(resid)))
        fallback = 1.4826 * global_mad
        if fallback == 0:
            fallback = float(np.mean(np.abs(resid)))
        g_scores = np.zeros(len(y))
        for i in range(len(y)):
            if resid[i] == 0:
                continue
            s = scale[i] if scale[i] > 0 else fallback
            if s > 0:
                g_scores[i] = abs(resid[i]) / s
        g_scores[:half] = 0.0
        g_scores[len(y) - half:] = 0.0
        scores[order] = g_scores
    return scores


def peak_scores(
    t: np.ndarray, x: np.ndarray, window: int = 3
) -> Tuple[np.ndarray, np.ndarray]:
    """Spike significance of local maxima.

    For every point, a = x_i - mean(neighbors within `window` each side);
    a is standardized over the whole series and local maxima with z > 1 are
    returned as (row_ids, z_scores).
    """
    t = np.asarray(t, float)
    x = np.asarray(x, float)
    n = len(x)
    if n < 8:
        raise MethodError("need >= 8 rows")
    order = _time_order(t)
    y = x[order]
    a = np.zeros(n)
    for i in range(n):
        lo = max(0, i - window)
        hi = min(n, i + window + 1)
        neighbors = np.concatenate([y[lo:i], y[i + 1: hi]])
        if len(neighbors):
            a[i] = y[i] - neighbors.mean()
    sd = a.std()
    if sd == 0:
        return np.array([], dtype=np.int64), np.array([])
    z = (a - a.mean()) / sd
    is_max = np.zeros(n, dtype=bool)
    is_max[1:-1] = (y[1:-1] > y[:-2]) & (y[1:-1] > y[2:])
    hits = np.flatnonzero(is_max & (z > 1.0))
    return order[hits].astype(np.int64), z[hits]


def seasonality_score(t: np.ndarray, x: np.ndarray) -> Tuple[float, Dict[str, float]]:
    """Max autocorrelation over lags 2..n/3 after linear detrend, in [0, 1]."""
    t = np.asarray(t, float)
    x = np.asarray(x, float)
    n = len(x)
    if n < 24:
        raise MethodError("series too short")
    y = x[_time_order(t)]
    if y.std() == 0:
        return 0.0, {"lag": 0}
    idx = np.arange(n, dtype=float)
    slope, intercept = np.polyfit(idx, y, 1)
    y = y - (slope * idx + intercept)
    denom = float((y - y.mean()) @ (y - y.mean()))
    if denom == 0:
        return 0.0, {"lag": 0}
    centered = y - y.mean()
    best, best_lag = 0.0, 0
    for lag in range(2, n // 3 + 1):
        r = float(centered[:-lag] @ centered[lag:]) / denom
        if r > best:
            best, best_lag = r, lag
    return float(min(1.0, max(0.0, best))), {"lag": best_lag}


def _granger_pvalue(y: np.ndarray, x: np.ndarray, p: int) -> float:
    """F-test that lags of x improve an AR(p) model of y."""
    n = len(y)
    rows = n - p
    ylag = np.column_stack([y[p - k - 1: n - k - 1] for k in range(p)])
    xlag = np.column_stack([x[p - k - 1: n - k - 1] for k in range(p)])
    target = y[p:]
    ones = np.ones((rows, 1))
    restricted = np.hstack([ones, ylag])
    full = np.hstack([ones, ylag, xlag])
    rss_r = _rss(restricted, target)
    rss_u = _rss(full, target)
    dof = rows - full.shape[1]
    if dof <= 0:
        raise MethodError("series too short for lag order")
    if rss_u <= 0:
        return 0.0
    f = ((rss_r - rss_u) / p) / (rss_u / dof)
    return float(stats.f.sf(max(f, 0.0), p, dof))


def _rss(X: np.ndarray, y: np.ndarray) -> float:
    beta, _, _, _ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ beta
    return float(resid @ resid)


def granger_causality_score(
    t: np.ndarray, x: np.ndarray, y: np.ndarray, lag: int = 2
) -> Tuple[float, Dict[str, object]]:
    """Granger F-test in both directions; score = 1 - min(p-value)."""
    if lag < 1:
        raise MethodError("lag must be >= 1")
    t = np.asarray(t, float)
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    n = len(t)
    if n < 4 * lag + 4:
        raise MethodError("series too short for Granger test")
    order = _time_order(t)
    xs, ys = x[order], y[order]
    if xs.std() == 0 or ys.std() == 0:
        raise MethodError("zero variance")
    p_xy = _granger_pvalue(ys, xs, lag)  # x -> y
    p_yx = _granger_pvalue(xs, ys, lag)  # y -> x
    if p_xy <= p_yx:
        direction, p = "x->y", p_xy
    else:
        direction, p = "y->x", p_yx
    return float(1.0 - p), {"direction": direction, "p_value": p, "lag": lag}

"""Single-column distribution-shape detectors."""
from __future__ import annotations

import numpy as np
from scipy import stats

from .outliers import MethodError


def skewness_score(x: np.ndarray) -> float:
    """|g1|, adjusted Fisher-Pearson sample skewness."""
    x = np.asarray(x, dtype=float)
    if len(x) < 8:
        raise MethodError("need >= 8 rows")
    if x.std() == 0:
        return 0.0
    return float(abs(stats.skew(x, bias=False)))


def heavy_tail_score(x: np.ndarray) -> float:
    """max(0, excess kurtosis); 0 for thin/flat tails."""
    x = np.asarray(x, dtype=float)
    if len(x) < 8:
        raise MethodError("need >= 8 rows")
    if x.std() == 0:
        return 0.0
    return float(max(0.0, stats.kurtosis(x, fisher=True, bias=True)))

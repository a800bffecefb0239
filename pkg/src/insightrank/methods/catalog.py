"""Insight-type catalog: which detectors run for which attribute-type
signature, with hyperparameter schemas and defaults.

Every registered detector is a pure function of (combination, params, seed)
returning a MethodOutput whose scores are "higher = more insightful".
Unbounded scalar statistics (skewness, kurtosis) are squashed to [0, 1)
via s/(1+s) at registration; the raw statistic is kept in metadata.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ..dataset import AttributeType, CombinationMatrix
from . import distribution, outliers, relationships, timeseries
from .outliers import MethodError

N, C, T = AttributeType.N, AttributeType.C, AttributeType.T

Signature = Tuple[AttributeType, ...]


@dataclass
class MethodOutput:
    method_id: str
    shape: str  # per_point | subset | scalar
    scores: np.ndarray
    row_ids: Optional[np.ndarray] = None  # subset only, local row positions
    higher_is_more_insightful: bool = True
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.scores = np.asarray(self.scores, dtype=float)
        if not np.all(np.isfinite(self.scores)):
            raise MethodError(f"{self.method_id}: non-finite scores")
        if self.shape == "subset":
            if self.row_ids is None or len(self.row_ids) != len(self.scores):
                raise MethodError(f"{self.method_id}: subset row_ids mismatch")
        elif self.shape == "scalar":
            if len(self.scores) != 1:
                raise MethodError(f"{self.method_id}: scalar must hold one score")

    @property
    def n_scores(self) -> int:
        return len(self.scores)


@dataclass(frozen=True)
class MethodSpec:
    id: str
    insight_type: str
    signature: Signature
    method_class: str  # statistical | info_theoretic | supervised | unsupervised
    output_shape: str
    defaults: Dict[str, object]
    run: Callable[[CombinationMatrix, Dict[str, object], int], MethodOutput]

    def params_with(self, overrides: Dict[str, object]) -> Dict[str, object]:
        unknown = set(overrides) - set(self.defaults)
        if unknown:
            raise MethodError(f"{self.id}: unknown hyperparameters {sorted(unknown)}")
        merged = dict(self.defaults)
        merged.update(overrides)
        return merged


@dataclass(frozen=True)
class InsightType:
    id: str
    display_name: str
    signatures: Tuple[Signature, ...]
    method_ids: Tuple[str, ...]

    def methods_for(self, signature: Signature) -> List["MethodSpec"]:
        return [
            METHODS[mid] for mid in self.method_ids if METHODS[mid].signature == signature
        ]


def _squash(value: float) -> float:
    return value / (1.0 + value)


# --- adapters -------------------------------------------------------------

def _iqr(mat, params, seed):
    return MethodOutput("iqr", "per_point", outliers.iqr_outlier_scores(mat.columns[0]))


def _zscore(mat, params, seed):
    return MethodOutput("zscore", "per_point", outliers.zscore_outlier_scores(mat.columns[0]))


def _dbscan(mat, params, seed):
    scores = outliers.dbscan_outlier_scores(
        mat.columns, eps=params["eps"], min_pts=int(params["min_pts"])
    )
    return MethodOutput("dbscan", "per_point", scores)


def _iforest(mid):
    def run(mat, params, seed):
        scores = outliers.isolation_forest_scores(
            mat.columns,
            n_trees=int(params["n_trees"]),
            subsample=int(params["subsample"]),
            seed=seed,
        )
        return MethodOutput(mid, "per_point", scores)

    return run


def _mahalanobis(mat, params, seed):
    return MethodOutput("mahalanobis", "per_point", outliers.mahalanobis_scores(mat.columns))


def _kmeans(mat, params, seed):
    scores = outliers.kmeans_distance_scores(mat.columns, k=int(params["k"]), seed=seed)
    return MethodOutput("kmeans_distance", "per_point", scores)


def _kernel_mean(mat, params, seed):
    scores = outliers.kernel_mean_distance_scores(
        mat.columns,
        kernel=str(params["kernel"]),
        gamma=params["gamma"],
        degree=int(params["degree"]),
    )
    return MethodOutput("kernel_mean_distance", "per_point", scores)


def _pearson(mat, params, seed):
    x, y = mat.columns
    r = relationships.pearson_correlation(x, y)
    signed = float(np.corrcoef(np.asarray(x, float), np.asarray(y, float))[0, 1])
    return MethodOutput("pearson", "scalar", [r], metadata={"r": signed})


def _spearman(mat, params, seed):
    rho = relationships.spearman_correlation(*mat.columns)
    return MethodOutput("spearman", "scalar", [rho], metadata={"rho": rho})


def _mutual_info(mid, x_cat, y_cat):
    def run(mat, params, seed):
        mi = relationships.mutual_information(
            mat.columns[0], mat.columns[1], x_cat, y_cat, bins=int(params["bins"])
        )
        return MethodOutput(mid, "scalar", [mi], metadata={"nmi": mi})

    return run


def _cramers(mat, params, seed):
    v = relationships.cramers_v(*mat.columns)
    return MethodOutput("cramers_v", "scalar", [v], metadata={"v": v})


def _chisq_residual(mat, params, seed):
    row_ids, scores, cells = relationships.chisq_residual_outliers(
        *mat.columns, threshold=float(params["threshold"])
    )
    return MethodOutput(
        "chisq_residual", "subset", scores, row_ids=row_ids, metadata={"cells": cells}
    )


def _group_difference(mat, params, seed):
    score, meta = relationships.group_difference_score(mat.columns[0], mat.columns[1])
    return MethodOutput("group_difference", "scalar", [score], metadata=meta)


def _skewness(mat, params, seed):
    raw = distribution.skewness_score(mat.columns[0])
    return MethodOutput("skewness", "scalar", [_squash(raw)], metadata={"g1": raw})


def _heavy_tail(mat, params, seed):
    raw = distribution.heavy_tail_score(mat.columns[0])
    return MethodOutput(
        "heavy_tail", "scalar", [_squash(raw)], metadata={"excess_kurtosis": raw}
    )


def _trend(mat, params, seed):
    r2, meta = timeseries.trend_score(mat.columns[0], mat.columns[1])
    return MethodOutput("trend_ols", "scalar", [r2], metadata=meta)


def _mann_kendall(mat, params, seed):
    score, meta = timeseries.mann_kendall_score(mat.columns[0], mat.columns[1])
    return MethodOutput("mann_kendall", "scalar", [score], metadata=meta)


def _rolling_residual(mid, with_groups):
    def run(mat, params, seed):
        groups = mat.columns[2] if with_groups else None
        scores = timeseries.rolling_residual_outlier_scores(
            mat.columns[0], mat.columns[1], groups=groups, window=int(params["window"])
        )
        return MethodOutput(mid, "per_point", scores)

    return run


def _peaks(mat, params, seed):
    row_ids, scores = timeseries.peak_scores(
        mat.columns[0], mat.columns[1], window=int(params["window"])
    )
    return MethodOutput("peaks", "subset", scores, row_ids=row_ids)


def _seasonality(mat, params, seed):
    score, meta = timeseries.seasonality_score(mat.columns[0], mat.columns[1])
    return MethodOutput("seasonality", "scalar", [score], metadata=meta)


def _granger(mat, params, seed):
    score, meta = timeseries.granger_causality_score(
        mat.columns[0], mat.columns[1], mat.columns[2], lag=int(params["lag"])
    )
    return MethodOutput("granger", "scalar", [score], metadata=meta)


# --- registry ---------------------------------------------------------------

def _spec(mid, itype, sig, cls, shape, defaults, run):
    return MethodSpec(mid, itype, sig, cls, shape, defaults, run)


METHODS: Dict[str, MethodSpec] = {
    m.id: m
    for m in [
        _spec("iqr", "single_variable_outliers", (N,), "statistical", "per_point", {}, _iqr),
        _spec("zscore", "single_variable_outliers", (N,), "statistical", "per_point", {}, _zscore),
        _spec(
            "dbscan", "two_variable_outliers", (N, N), "unsupervised", "per_point",
            {"eps": None, "min_pts": 5}, _dbscan,
        ),
        _spec(
            "isolation_forest_2d", "two_variable_outliers", (N, N), "unsupervised", "per_point",
            {"n_trees": 100, "subsample": 256}, _iforest("isolation_forest_2d"),
        ),
        _spec(
            "chisq_residual", "two_variable_outliers", (C, C), "statistical", "subset",
            {"threshold": 2.0}, _chisq_residual,
        ),
        _spec(
            "isolation_forest_3d", "multivariate_outliers", (N, N, N), "unsupervised", "per_point",
            {"n_trees": 100, "subsample": 256}, _iforest("isolation_forest_3d"),
        ),
        _spec(
            "mahalanobis", "multivariate_outliers", (N, N, N), "statistical", "per_point",
            {}, _mahalanobis,
        ),
        _spec(
            "kmeans_distance", "multivariate_outliers", (N, N, N), "unsupervised", "per_point",
            {"k": 3}, _kmeans,
        ),
        _spec(
            "kernel_mean_distance", "multivariate_outliers", (N, N, N), "unsupervised",
            "per_point", {"kernel": "rbf", "gamma": None, "degree": 3}, _kernel_mean,
        ),
        _spec(
            "rolling_residual_tn", "timeseries_outliers", (T, N), "statistical", "per_point",
            {"window": 7}, _rolling_residual("rolling_residual_tn", False),
        ),
        _spec(
            "rolling_residual_tnc", "timeseries_outliers", (T, N, C), "statistical", "per_point",
            {"window": 7}, _rolling_residual("rolling_residual_tnc", True),
        ),
        _spec("peaks", "peaks", (T, N), "statistical", "subset", {"window": 3}, _peaks),
        _spec("trend_ols", "trend", (T, N), "supervised", "scalar", {}, _trend),
        _spec("mann_kendall", "trend", (T, N), "statistical", "scalar", {}, _mann_kendall),
        _spec("seasonality", "seasonality", (T, N), "statistical", "scalar", {}, _seasonality),
        _spec("pearson", "linear_correlation", (N, N), "statistical", "scalar", {}, _pearson),
        _spec("spearman", "nonlinear_correlation", (N, N), "statistical", "scalar", {}, _spearman),
        _spec(
            "mutual_info_nn", "nonlinear_correlation", (N, N), "info_theoretic", "scalar",
            {"bins": 10}, _mutual_info("mutual_info_nn", False, False),
        ),
        _spec(
            "cramers_v", "categorical_association", (C, C), "statistical", "scalar", {}, _cramers,
        ),
        _spec(
            "mutual_info_cc", "categorical_association", (C, C), "info_theoretic", "scalar",
            {"bins": 10}, _mutual_info("mutual_info_cc", True, True),
        ),
        _spec(
            "group_difference", "group_difference", (C, N), "statistical", "scalar",
            {}, _group_difference,
        ),
        _spec(
            "mutual_info_cn", "group_difference", (C, N), "info_theoretic", "scalar",
            {"bins": 10}, _mutual_info("mutual_info_cn", True, False),
        ),
        _spec("skewness", "skew", (N,), "statistical", "scalar", {}, _skewness),
        _spec("heavy_tail", "heavy_tails", (N,), "statistical", "scalar", {}, _heavy_tail),
        _spec(
            "granger", "timeseries_causality", (T, N, N), "supervised", "scalar",
            {"lag": 2}, _granger,
        ),
    ]
}


def _insight_type(id_, name, signatures):
    mids = tuple(m.id for m in METHODS.values() if m.insight_type == id_)
    return InsightType(id_, name, tuple(signatures), mids)


CATALOG: Tuple[InsightType, ...] = (
    _insight_type("single_variable_outliers", "Single-variable outliers", [(N,)]),
    _insight_type("two_variable_outliers", "Two-variable outliers", [(N, N), (C, C)]),
    _insight_type("multivariate_outliers", "Multivariate outliers", [(N, N, N)]),
    _insight_type("timeseries_outliers", "Time-series outliers", [(T, N), (T, N, C)]),
    _insight_type("peaks", "Peaks", [(T, N)]),
    _insight_type("trend", "Trend", [(T, N)]),
    _insight_type("seasonality", "Seasonality", [(T, N)]),
    _insight_type("linear_correlation", "Linear correlation", [(N, N)]),
    _insight_type("nonlinear_correlation", "Nonlinear correlation", [(N, N)]),
    _insight_type("categorical_association", "Categorical association", [(C, C)]),
    _insight_type("group_difference", "Group difference", [(C, N)]),
    _insight_type("skew", "Skew", [(N,)]),
    _insight_type("heavy_tails", "Heavy tails", [(N,)]),
    _insight_type("timeseries_causality", "Time-series causality", [(T, N, N)]),
)

CATALOG_BY_ID: Dict[str, InsightType] = {it.id: it for it in CATALOG}
CATALOG_ORDER: Dict[str, int] = {it.id: i for i, it in enumerate(CATALOG)}

OUTLIER_LIKE_TYPES = {
    "single_variable_outliers",
    "two_variable_outliers",
    "multivariate_outliers",
    "timeseries_outliers",
    "peaks",
}


def run_method(
    spec: MethodSpec, mat: CombinationMatrix, overrides: Dict[str, object], seed: int
) -> MethodOutput:
    params = spec.params_with(overrides)
    out = spec.run(mat, params, seed)
    if out.shape == "per_point" and len(out.scores) != mat.n_rows:
        raise MethodError(f"{spec.id}: per_point length mismatch")
    if out.shape == "subset" and out.row_ids is not None and len(out.row_ids):
        if out.row_ids.min() < 0 or out.row_ids.max() >= mat.n_rows:
            raise MethodError(f"{spec.id}: subset row_ids out of range")
    return out

from .catalog import (
    CATALOG,
    CATALOG_BY_ID,
    CATALOG_ORDER,
    METHODS,
    OUTLIER_LIKE_TYPES,
    InsightType,
    MethodOutput,
    MethodSpec,
    run_method,
)
from .distribution import heavy_tail_score, skewness_score
from .outliers import (
    MethodError,
    dbscan_outlier_scores,
    iqr_outlier_scores,
    isolation_forest_scores,
    kernel_mean_distance_scores,
    kmeans_distance_scores,
    mahalanobis_scores,
    zscore_outlier_scores,
)
from .relationships import (
    chisq_residual_outliers,
    cramers_v,
    group_difference_score,
    mutual_information,
    pearson_correlation,
    spearman_correlation,
)
from .timeseries import (
    granger_causality_score,
    mann_kendall_score,
    peak_scores,
    rolling_residual_outlier_scores,
    seasonality_score,
    trend_score,
)

__all__ = [
    "CATALOG",
    "CATALOG_BY_ID",
    "CATALOG_ORDER",
    "METHODS",
    "OUTLIER_LIKE_TYPES",
    "InsightType",
    "MethodError",
    "MethodOutput",
    "MethodSpec",
    "run_method",
    "chisq_residual_outliers",
    "cramers_v",
    "dbscan_outlier_scores",
    "granger_causality_score",
    "group_difference_score",
    "heavy_tail_score",
    "iqr_outlier_scores",
    "isolation_forest_scores",
    "kernel_mean_distance_scores",
    "kmeans_distance_scores",
    "mahalanobis_scores",
    "mann_kendall_score",
    "mutual_information",
    "peak_scores",
    "pearson_correlation",
    "rolling_residual_outlier_scores",
    "seasonality_score",
    "skewness_score",
    "spearman_correlation",
    "trend_score",
    "zscore_outlier_scores",
]

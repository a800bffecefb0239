"""insightrank: automated insight discovery and visualization
recommendation for tabular data."""

from .config import ConfigError, EngineConfig
from .dataset import (
    AttributeType,
    Column,
    CombinationMatrix,
    CombinationSpec,
    Dataset,
    DatasetError,
    enumerate_combinations,
    infer_attribute_type,
    load_csv,
    sample_rows,
)
from .engine import (
    AnalysisResult,
    InsightRecommender,
    UnknownAttributeError,
    analyze,
    dataset_from_dataframe,
    recommendations_to_dict,
    recommendations_to_json,
)
from .ranking import (
    InsightCandidate,
    InsightTypeRow,
    PointRankAggregate,
    Recommendations,
    aggregate_phi,
    average_point_ranks,
    complexity_penalty,
    group_minmax,
    kendall_tau,
    normalize_method_output,
    rank_insight_types,
    rank_insights,
    score_insight_type,
)
from .vizrec import AnnotationSpec, ChartSpec, annotate, infer_charts, render_candidate

__version__ = "0.1.0"

__all__ = [
    "AnalysisResult",
    "AnnotationSpec",
    "AttributeType",
    "ChartSpec",
    "Column",
    "CombinationMatrix",
    "CombinationSpec",
    "ConfigError",
    "Dataset",
    "DatasetError",
    "EngineConfig",
    "InsightCandidate",
    "InsightRecommender",
    "InsightTypeRow",
    "PointRankAggregate",
    "Recommendations",
    "UnknownAttributeError",
    "aggregate_phi",
    "analyze",
    "annotate",
    "average_point_ranks",
    "complexity_penalty",
    "dataset_from_dataframe",
    "enumerate_combinations",
    "group_minmax",
    "infer_attribute_type",
    "infer_charts",
    "kendall_tau",
    "load_csv",
    "normalize_method_output",
    "rank_insight_types",
    "rank_insights",
    "recommendations_to_dict",
    "recommendations_to_json",
    "render_candidate",
    "sample_rows",
    "score_insight_type",
]

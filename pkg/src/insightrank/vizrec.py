"""Rule-based chart inference and annotation.

Each catalog signature maps to a weighted list of chart candidates; the
rank-1 chart is rendered with inline data (capped at 2000 rows, annotated
rows always retained) and annotations driven by the point-rank aggregate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Dict, List, Optional, Tuple

import numpy as np

from .dataset import AttributeType, CombinationMatrix
from .ranking import InsightCandidate

N, C, T = AttributeType.N, AttributeType.C, AttributeType.T

INLINE_DATA_CAP = 2000


class VizRecError(ValueError):
    pass


@dataclass
class AnnotationSpec:
    kind: str  # point_highlight | trend_line | band | cell_highlight
    target: object  # row ids, cell coordinates, or line coefficients
    label: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "target": self.target, "label": self.label}


@dataclass
class ChartSpec:
    chart_type: str
    encodings: Dict[str, str]  # channel -> column name
    weight: float
    title: str = ""
    insight_sentence: str = ""
    annotations: List[AnnotationSpec] = field(default_factory=list)
    inline_data: List[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "chart_type": self.chart_type,
            "encodings": self.encodings,
            "weight": self.weight,
            "title": self.title,
            "insight_sentence": self.insight_sentence,
            "annotations": [a.to_dict() for a in self.annotations],
            "inline_data": self.inline_data,
        }


# weight table: signature -> [(chart_type, weight, channel assignment)]
# channel assignment maps channels to signature slot indices
_CHART_RULES: Dict[Tuple[AttributeType, ...], List[Tuple[str, float, Dict[str, int]]]] = {
    (N,): [("histogram", 1.0, {"x": 0}), ("box", 0.8, {"x": 0})],
    (N, N): [("scatter", 1.0, {"x": 0, "y": 1}), ("heatmap", 0.6, {"x": 0, "y": 1})],
    (T, N): [("line", 1.0, {"x": 0, "y": 1}), ("scatter", 0.5, {"x": 0, "y": 1})],
    (T, N, C): [("line", 1.0, {"x": 0, "y": 1, "color": 2})],
    (C, C): [("heatmap", 1.0, {"x": 0, "y": 1}), ("grouped_bar", 0.7, {"x": 0, "color": 1})],
    (C, N): [
        ("box", 1.0, {"x": 0, "y": 1}),
        ("bar", 0.8, {"x": 0, "y": 1}),
        ("strip", 0.5, {"x": 0, "y": 1}),
    ],
    (N, N, N): [("scatter", 1.0, {"x": 0, "y": 1, "size": 2})],
    # two series over time (causality pairs)
    (T, N, N): [("line", 1.0, {"x": 0, "y": 1, "color": 2})],
}


def infer_charts(cand: InsightCandidate) -> List[ChartSpec]:
    """Ranked chart candidates for the combination's signature, rank-1 first."""
    sig = tuple(cand.combination.signature)
    rules = _CHART_RULES.get(sig)
    if rules is None:
        raise VizRecError(f"no chart rule for signature {sig}")
    cols = cand.combination.column_names
    specs = [
        ChartSpec(
            chart_type=ct,
            encodings={ch: cols[slot] for ch, slot in channels.items()},
            weight=w,
            title=_title(cand),
        )
        for ct, w, channels in rules
    ]
    specs.sort(key=lambda s: -s.weight)  # stable: enumeration order breaks ties
    return specs


_DISPLAY = {
    "single_variable_outliers": "Single-variable outliers",
    "two_variable_outliers": "Two-variable outliers",
    "multivariate_outliers": "Multivariate outliers",
    "timeseries_outliers": "Time-series outliers",
    "peaks": "Peaks",
    "trend": "Trend",
    "seasonality": "Seasonality",
    "linear_correlation": "Linear correlation",
    "nonlinear_correlation": "Nonlinear correlation",
    "categorical_association": "Categorical association",
    "group_difference": "Group difference",
    "skew": "Skew",
    "heavy_tails": "Heavy tails",
    "timeseries_causality": "Time-series causality",
}


def _title(cand: InsightCandidate) -> str:
    name = _DISPLAY.get(cand.insight_type_id, cand.insight_type_id)
    return f"{name}: {' / '.join(cand.combination.column_names)}"


def _meta(cand: InsightCandidate, method_id: str) -> Optional[dict]:
    for out in cand.method_outputs:
        if out.method_id == method_id:
            return out.metadata
    return None


def _sentence(cand: InsightCandidate, n_marks: int) -> str:
    t = cand.insight_type_id
    cols = cand.combination.column_names
    if t == "linear_correlation":
        meta = _meta(cand, "pearson") or {}
        return f"Pearson |r| = {abs(meta.get('r', 0.0)):.2f} between {cols[0]} and {cols[1]}."
    if t == "nonlinear_correlation":
        rho = (_meta(cand, "spearman") or {}).get("rho", 0.0)
        nmi = (_meta(cand, "mutual_info_nn") or {}).get("nmi")
        extra = f", normalized MI = {nmi:.2f}" if nmi is not None else ""
        return f"Spearman |rho| = {rho:.2f}{extra} for {cols[0]} vs {cols[1]}."
    if t == "categorical_association":
        v = (_meta(cand, "cramers_v") or {}).get("v", 0.0)
        return f"Cramer's V = {v:.2f} between {cols[0]} and {cols[1]}."
    if t == "group_difference":
        p = (_meta(cand, "group_difference") or {}).get("p_value")
        tail = f" (Kruskal-Wallis p = {p:.3g})" if p is not None else ""
        return f"{cols[1]} differs across {cols[0]} groups{tail}."
    if t == "trend":
        meta = _meta(cand, "trend_ols") or {}
        slope = meta.get("slope", 0.0)
        direction = "upward" if slope >= 0 else "downward"
        return f"{direction.capitalize()} trend of {cols[1]} over {cols[0]} (R^2 = {cand.phi:.2f})."
    if t == "seasonality":
        lag = (_meta(cand, "seasonality") or {}).get("lag", 0)
        return f"Repeating pattern in {cols[1]} (strongest at lag {lag})."
    if t == "timeseries_causality":
        meta = _meta(cand, "granger") or {}
        direction = meta.get("direction", "x->y")
        a, b = (cols[1], cols[2]) if direction == "x->y" else (cols[2], cols[1])
        return f"Past values of {a} help predict {b} (p = {meta.get('p_value', 1.0):.3g})."
    if t == "skew":
        g1 = (_meta(cand, "skewness") or {}).get("g1", 0.0)
        return f"{cols[0]} is skewed (g1 = {g1:.2f})."
    if t == "heavy_tails":
        k = (_meta(cand, "heavy_tail") or {}).get("excess_kurtosis", 0.0)
        return f"{cols[0]} has heavy tails (excess kurtosis = {k:.2f})."
    if t == "peaks":
        return f"{n_marks} significant peak(s) in {cols[1]}."
    # outlier families
    what = " and ".join(cols[-2:]) if len(cols) > 1 else cols[0]
    return f"{n_marks} point(s) stand out in {what}."


def annotate(cand: InsightCandidate, spec: ChartSpec, max_marks: int = 5) -> ChartSpec:
    """Attach annotations from the point-rank aggregate and method metadata."""
    annotations: List[AnnotationSpec] = []
    orig_ids = cand.metadata.get("orig_row_ids")
    # C x C outlier cells
    chisq = _meta(cand, "chisq_residual")
    if chisq and chisq.get("cells") and cand.matrix is not None:
        cats = cand.matrix.categories
        for i, j, resid in chisq["cells"][:max_marks]:
            label_i = cats[0][i] if cats[0] else str(i)
            label_j = cats[1][j] if cats[1] else str(j)
            annotations.append(
                AnnotationSpec(
                    kind="cell_highlight",
                    target=[label_i, label_j],
                    label=f"residual {resid:+.1f}",
                )
            )
    elif cand.point_ranks is not None and cand.insight_type_id in {
        "single_variable_outliers",
        "two_variable_outliers",
        "multivariate_outliers",
        "timeseries_outliers",
        "peaks",
    }:
        ranked = sorted(cand.point_ranks.avg_rank_per_row.items(), key=lambda kv: (kv[1], kv[0]))
        for local, avg in ranked[:max_marks]:
            rid = int(orig_ids[local]) if orig_ids is not None else int(local)
            annotations.append(
                AnnotationSpec(kind="point_highlight", target=[rid], label=f"avg rank {avg:.1f}")
            )
    if cand.insight_type_id == "trend":
        meta = _meta(cand, "trend_ols") or {}
        if meta:
            annotations.append(
                AnnotationSpec(
                    kind="trend_line",
                    target={"a": meta.get("slope", 0.0), "b": meta.get("intercept", 0.0)},
                    label="OLS fit",
                )
            )
    n_marks = sum(1 for a in annotations if a.kind in ("point_highlight", "cell_highlight"))
    spec.annotations = annotations
    spec.insight_sentence = _sentence(cand, n_marks)
    return spec


def _format_value(
    value, attr_type: AttributeType, categories: Optional[List[str]]
):
    if attr_type is AttributeType.T:
        return datetime.fromtimestamp(float(value), tz=timezone.utc).isoformat()
    if attr_type is AttributeType.C:
        idx = int(value)
        return categories[idx] if categories and 0 <= idx < len(categories) else str(idx)
    return float(value)


def build_inline_data(cand: InsightCandidate, spec: ChartSpec, cap: int = INLINE_DATA_CAP) -> None:
    """Downsample the combination rows for rendering.

    Annotated rows are always retained; remaining capacity is filled with an
    evenly spaced (deterministic) selection preserving row order.
    """
    mat = cand.matrix
    if mat is None:
        spec.inline_data = []
        return
    orig_ids = cand.metadata.get("orig_row_ids")
    if orig_ids is None:
        orig_ids = mat.kept_row_indices
    n = mat.n_rows
    highlighted = set()
    for a in spec.annotations:
        if a.kind == "point_highlight":
            highlighted.update(int(r) for r in a.target)
    id_to_local = {int(orig_ids[i]): i for i in range(n)}
    keep = {id_to_local[r] for r in highlighted if r in id_to_local}
    budget = cap - len(keep)
    if n <= cap:
        keep = set(range(n))
    elif budget > 0:
        keep.update(int(i) for i in np.linspace(0, n - 1, budget).astype(int))
    locals_sorted = sorted(keep)
    records = []
    for i in locals_sorted:
        rec = {"_row": int(orig_ids[i])}
        for j, (col, attr) in enumerate(zip(mat.columns, cand.combination.signature)):
            rec[cand.combination.column_names[j]] = _format_value(col[i], attr, mat.categories[j])
        records.append(rec)
    spec.inline_data = records


def render_candidate(cand: InsightCandidate, max_marks: int = 5) -> ChartSpec:
    """Rank-1 chart, annotated, with inline data."""
    spec = infer_charts(cand)[0]
    annotate(cand, spec, max_marks=max_marks)
    build_inline_data(cand, spec)
    return spec

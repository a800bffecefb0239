"""Pipeline orchestration: enumerate combinations, run the detector
ensemble, score, rank, chart — plus interactive attribute filtering over
the cached candidate pool.

`InsightRecommender` wraps the pipeline in an sklearn-style estimator
(fit / recommend, get_params) so it composes with that ecosystem.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from sklearn.base import BaseEstimator

from . import vizrec
from .config import EngineConfig
from .dataset import (
    AttributeType,
    CombinationMatrix,
    Dataset,
    enumerate_combinations,
    load_csv,
    sample_rows,
)
from .methods.catalog import CATALOG, CATALOG_ORDER, MethodOutput, run_method
from .methods.outliers import MethodError
from .ranking import (
    InsightCandidate,
    InsightTypeRow,
    Recommendations,
    aggregate_phi,
    average_point_ranks,
    complexity_penalty,
    group_minmax,
    normalize_method_output,
    rank_insight_types,
    rank_insights,
    score_insight_type,
)


class UnknownAttributeError(ValueError):
    def __init__(self, name: str):
        super().__init__(f"unknown attribute: {name}")
        self.attribute = name


def _task_seed(seed: int, type_id: str, cols: Tuple[str, ...]) -> int:
    blob = f"{seed}|{type_id}|{'|'.join(cols)}".encode("utf-8")
    return int.from_bytes(hashlib.sha256(blob).digest()[:4], "big")


def _score_combination(
    type_id: str, mat: CombinationMatrix, config: EngineConfig, ds: Dataset
) -> Optional[InsightCandidate]:
    itype = next(it for it in CATALOG if it.id == type_id)
    outputs: List[MethodOutput] = []
    seed = _task_seed(config.seed, type_id, mat.spec.column_names)
    for spec in itype.methods_for(mat.spec.signature):
        try:
            outputs.append(run_method(spec, mat, config.method_params(spec.id), seed))
        except MethodError:
            continue  # precondition not met for this combination
    if not outputs:
        return None
    cand = InsightCandidate(
        insight_type_id=type_id,
        combination=mat.spec,
        method_outputs=outputs,
        matrix=mat,
    )
    cand.phi = aggregate_phi([normalize_method_output(o) for o in outputs])
    cand.penalized_phi = complexity_penalty(
        cand.phi, len(mat.spec.signature), config.penalty_lambda
    )
    cand.metadata["orig_row_ids"] = ds.row_ids[mat.kept_row_indices]
    return cand


class AnalysisResult:
    """Immutable candidate pool produced by analyze(); filtering re-ranks
    cached candidates without re-running any detector."""

    def __init__(self, dataset: Dataset, config: EngineConfig, candidates: List[InsightCandidate]):
        self.dataset = dataset
        self.config = config
        self.candidates = candidates

    def attribute_names(self) -> List[str]:
        return [c.name for c in self.dataset.columns]

    def recommendations(
        self,
        attributes: Optional[Sequence[str]] = None,
        top_r: Optional[int] = None,
        top_k: Optional[int] = None,
    ) -> Recommendations:
        top_r = top_r or self.config.top_r
        top_k = top_k or self.config.top_k
        known = set(self.attribute_names())
        attrs = list(attributes or [])
        for a in attrs:
            if a not in known:
                raise UnknownAttributeError(a)
        pool = [
            dataclasses.replace(c, point_ranks=None, metadata=dict(c.metadata))
            for c in self.candidates
            if all(a in c.combination.column_names for a in attrs)
        ]
        group_minmax(pool)
        by_type: Dict[str, List[InsightCandidate]] = {}
        for c in pool:
            by_type.setdefault(c.insight_type_id, []).append(c)
        rows: List[InsightTypeRow] = []
        for itype in CATALOG:
            cands = by_type.get(itype.id)
            if not cands:
                continue
            ranked = rank_insights(cands, itype.signatures)
            top = ranked[:top_k]
            for c in top:
                c.point_ranks = average_point_ranks(c)
                chart = vizrec.render_candidate(c, max_marks=self.config.max_marks)
                c.metadata["chart"] = chart
            rows.append(
                InsightTypeRow(
                    insight_type_id=itype.id,
                    psi=score_insight_type(cands),
                    ranked_candidates=top,
                    candidate_pool_size=len(cands),
                )
            )
        rows = rank_insight_types(rows, CATALOG_ORDER)[:top_r]
        return Recommendations(
            rows=rows,
            top_r=top_r,
            top_k=top_k,
            dataset_name=self.dataset.name,
            config_fingerprint=self.config.fingerprint(),
        )


def analyze(ds: Dataset, config: Optional[EngineConfig] = None) -> AnalysisResult:
    """Run the full discovery pipeline; deterministic under (data, config)."""
    config = config or EngineConfig()
    ds = sample_rows(ds, config.max_rows, config.seed)
    tasks: List[Tuple[Tuple[int, int, int], str, CombinationMatrix]] = []
    for ti, itype in enumerate(CATALOG):
        for si, sig in enumerate(itype.signatures):
            mats = enumerate_combinations(ds, sig, config.combination_cap, config.min_rows)
            for ci, mat in enumerate(mats):
                tasks.append(((ti, si, ci), itype.id, mat))

    def work(task):
        key, type_id, mat = task
        return key, _score_combination(type_id, mat, config, ds)

    if config.workers == 1:
        results = [work(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(work, tasks))
    results.sort(key=lambda kv: kv[0])  # merge independent of completion order
    candidates = [cand for _, cand in results if cand is not None]
    return AnalysisResult(ds, config, candidates)


# ---------------------------------------------------------------------------
# serialization

def recommendations_to_dict(recs: Recommendations) -> dict:
    rows = []
    for row in recs.rows:
        insights = []
        for c in row.ranked_candidates:
            chart = c.metadata.get("chart")
            insights.append(
                {
                    "combination": c.combination.to_dict(),
                    "phi": c.phi,
                    "penalized_phi": c.penalized_phi,
                    "score": c.group_normalized_score,
                    "chart": chart.to_dict() if chart is not None else None,
                    "annotations": [a.to_dict() for a in chart.annotations] if chart else [],
                }
            )
        rows.append(
            {
                "insight_type": row.insight_type_id,
                "psi": row.psi,
                "pool_size": row.candidate_pool_size,
                "insights": insights,
            }
        )
    return {
        "dataset": recs.dataset_name,
        "config_fingerprint": recs.config_fingerprint,
        "top_r": recs.top_r,
        "top_k": recs.top_k,
        "empty": not rows,
        "rows": rows,
    }


def recommendations_to_json(recs: Recommendations, indent: Optional[int] = None) -> str:
    return json.dumps(recommendations_to_dict(recs), sort_keys=True, indent=indent)


# ---------------------------------------------------------------------------
# sklearn-style front door

class InsightRecommender(BaseEstimator):
    """Discover, score and rank insights for a tabular dataset.

    Parameters mirror the engine config; `fit` accepts a CSV path, a
    Dataset, or a pandas DataFrame.
    """

    def __init__(
        self,
        top_r: int = 10,
        top_k: int = 5,
        penalty_lambda: float = 0.9,
        seed: int = 0,
        max_rows: int = 10_000,
        cardinality_cap: int = 50,
        combination_cap: int = 200,
        min_rows: int = 8,
        workers: int = 1,
        max_marks: int = 5,
        methods: Optional[Dict[str, Dict[str, object]]] = None,
    ):
        self.top_r = top_r
        self.top_k = top_k
        self.penalty_lambda = penalty_lambda
        self.seed = seed
        self.max_rows = max_rows
        self.cardinality_cap = cardinality_cap
        self.combination_cap = combination_cap
        self.min_rows = min_rows
        self.workers = workers
        self.max_marks = max_marks
        self.methods = methods

    def _config(self) -> EngineConfig:
        return EngineConfig(
            top_r=self.top_r,
            top_k=self.top_k,
            penalty_lambda=self.penalty_lambda,
            seed=self.seed,
            max_rows=self.max_rows,
            cardinality_cap=self.cardinality_cap,
            combination_cap=self.combination_cap,
            min_rows=self.min_rows,
            workers=self.workers,
            max_marks=self.max_marks,
            methods=self.methods or {},
        )

    def fit(self, X: Union[str, Dataset, "object"], y=None):
        config = self._config()
        if isinstance(X, Dataset):
            ds = X
        elif isinstance(X, str):
            ds = load_csv(X, config)
        else:
            ds = dataset_from_dataframe(X, config)
        self.result_ = analyze(ds, config)
        return self

    def recommend(
        self,
        attributes: Optional[Sequence[str]] = None,
        top_r: Optional[int] = None,
        top_k: Optional[int] = None,
    ) -> Recommendations:
        if not hasattr(self, "result_"):
            raise RuntimeError("call fit() first")
        return self.result_.recommendations(attributes=attributes, top_r=top_r, top_k=top_k)

    def recommend_dict(self, **kwargs) -> dict:
        return recommendations_to_dict(self.recommend(**kwargs))


def dataset_from_dataframe(df, config: Optional[EngineConfig] = None, name: str = "dataframe") -> Dataset:
    """Build a Dataset from a pandas DataFrame using dtype-based typing."""
    import pandas as pd  # optional dependency path

    from .dataset import Column

    config = config or EngineConfig()
    n = len(df)
    if n == 0:
        raise ValueError("empty dataframe")
    columns = []
    for col_name in df.columns:
        s = df[col_name]
        if pd.api.types.is_datetime64_any_dtype(s):
            vals = s.astype("int64").to_numpy().astype(float) / 1e9
            vals[s.isna().to_numpy()] = np.nan
            columns.append(Column(str(col_name), AttributeType.T, vals, float(s.isna().mean())))
        elif pd.api.types.is_numeric_dtype(s):
            vals = s.to_numpy(dtype=float)
            columns.append(Column(str(col_name), AttributeType.N, vals, float(np.isnan(vals).mean())))
        else:
            codes, cats = pd.factorize(s.astype(str).where(~s.isna(), None))
            attr = AttributeType.C if len(cats) <= config.cardinality_cap else None
            columns.append(
                Column(str(col_name), attr, codes.astype(np.int64), float(s.isna().mean()),
                       categories=[str(c) for c in cats])
            )
    return Dataset(name=name, columns=columns, row_count=n)

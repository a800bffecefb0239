import numpy as np
import pandas as pd
import pytest
from sklearn.base import clone

from insightrank.config import EngineConfig
from insightrank.dataset import AttributeType, Column, Dataset, load_csv
from insightrank.engine import (
    AnalysisResult,
    InsightRecommender,
    UnknownAttributeError,
    analyze,
    dataset_from_dataframe,
    recommendations_to_dict,
    recommendations_to_json,
)

from conftest import outlier_heavy_dataset, write_weather_csv


@pytest.fixture(scope="module")
def weather_result(tmp_path_factory):
    path = write_weather_csv(str(tmp_path_factory.mktemp("w") / "weather.csv"))
    return analyze(load_csv(path))


class TestAnalyze:
    def test_repeat_runs_byte_identical(self, weather_csv):
        a = recommendations_to_json(analyze(load_csv(weather_csv)).recommendations())
        b = recommendations_to_json(analyze(load_csv(weather_csv)).recommendations())
        assert a == b

    def test_worker_count_does_not_change_output(self, weather_csv):
        ds = load_csv(weather_csv)
        docs = []
        for workers in (1, 4):
            res = analyze(ds, EngineConfig(workers=workers))
            docs.append(recommendations_to_json(res.recommendations()))
        assert docs[0] == docs[1]

    def test_mixed_types_cover_many_insight_types(self, weather_result):
        recs = weather_result.recommendations(top_r=20)
        types = {r.insight_type_id for r in recs.rows}
        # T+N+C schema feeds every family except the 3-numeric ones needing
        # more numeric columns than... 3 exist, so those appear too
        assert "trend" in types and "seasonality" in types
        assert "group_difference" in types and "single_variable_outliers" in types
        assert len(types) >= 10

    def test_psi_descending_and_scores_descending(self, weather_result):
        recs = weather_result.recommendations(top_r=20)
        psis = [r.psi for r in recs.rows]
        assert psis == sorted(psis, reverse=True)
        for row in recs.rows:
            scores = [c.group_normalized_score for c in row.ranked_candidates]
            assert scores == sorted(scores, reverse=True)
            assert all(0.0 <= s <= 1.0 for s in scores)
            assert row.candidate_pool_size >= len(row.ranked_candidates)

    def test_rank_one_insight_scores_one(self, weather_result):
        for row in weather_result.recommendations(top_r=20).rows:
            assert row.ranked_candidates[0].group_normalized_score == 1.0

    def test_top_k_and_top_r_respected(self, weather_result):
        recs = weather_result.recommendations(top_r=3, top_k=2)
        assert len(recs.rows) <= 3
        assert all(len(r.ranked_candidates) <= 2 for r in recs.rows)

    def test_charts_attached_to_every_ranked_insight(self, weather_result):
        for row in weather_result.recommendations(top_r=20).rows:
            for c in row.ranked_candidates:
                chart = c.metadata.get("chart")
                assert chart is not None
                assert chart.chart_type and chart.insight_sentence


class TestFilter:
    def test_unknown_attribute_raises(self, weather_result):
        with pytest.raises(UnknownAttributeError):
            weather_result.recommendations(attributes=["nope"])

    def test_conjunctive_postcondition(self, weather_result):
        recs = weather_result.recommendations(attributes=["temp", "wind"], top_r=20)
        for row in recs.rows:
            for c in row.ranked_candidates:
                assert {"temp", "wind"} <= set(c.combination.column_names)

    def test_filter_is_subset_of_unfiltered_pool(self, weather_result):
        full = weather_result.recommendations(top_r=20)
        filt = weather_result.recommendations(attributes=["temp"], top_r=20)
        assert {r.insight_type_id for r in filt.rows} <= {
            r.insight_type_id for r in full.rows
        }

    def test_unsatisfiable_filter_gives_empty_marker(self, weather_result):
        recs = weather_result.recommendations(
            attributes=["date", "temp", "wind", "weather"]
        )
        doc = recommendations_to_dict(recs)
        assert doc["empty"] is True and doc["rows"] == []

    def test_filtering_does_not_corrupt_later_calls(self, weather_result):
        before = recommendations_to_json(weather_result.recommendations())
        weather_result.recommendations(attributes=["temp"])
        weather_result.recommendations(attributes=["wind", "precip"])
        after = recommendations_to_json(weather_result.recommendations())
        assert before == after


class TestDegenerateInputs:
    def test_single_categorical_column_is_empty(self):
        codes = np.array([0, 1, 0, 1, 0, 1, 0, 1, 0, 1], dtype=np.int64)
        ds = Dataset(
            "lonely",
            [Column("label", AttributeType.C, codes, 0.0, categories=["a", "b"])],
            10,
        )
        doc = recommendations_to_dict(analyze(ds).recommendations())
        assert doc["empty"] is True

    def test_combination_cap_limits_pool(self):
        rng = np.random.default_rng(0)
        cols = [
            Column(f"n{i}", AttributeType.N, rng.normal(size=30), 0.0) for i in range(8)
        ]
        ds = Dataset("wide", cols, 30)
        res = analyze(ds, EngineConfig(combination_cap=5))
        for row in res.recommendations(top_r=20).rows:
            assert row.candidate_pool_size <= 2 * 5  # at most cap per signature


class TestSerialization:
    def test_document_shape(self, weather_result):
        doc = recommendations_to_dict(weather_result.recommendations())
        assert set(doc) == {
            "dataset", "config_fingerprint", "top_r", "top_k", "empty", "rows",
        }
        row = doc["rows"][0]
        assert set(row) == {"insight_type", "psi", "pool_size", "insights"}
        ins = row["insights"][0]
        assert set(ins) == {
            "combination", "phi", "penalized_phi", "score", "chart", "annotations",
        }
        assert set(ins["combination"]) == {"signature", "columns"}

    def test_json_round_trips(self, weather_result):
        import json

        doc = recommendations_to_json(weather_result.recommendations(), indent=2)
        assert json.loads(doc)["rows"]


class TestRecommenderEstimator:
    def test_get_params_round_trip(self):
        est = InsightRecommender(top_r=4, seed=9)
        params = est.get_params()
        assert params["top_r"] == 4 and params["seed"] == 9
        cloned = clone(est)
        assert cloned.get_params() == params

    def test_unfitted_raises(self):
        with pytest.raises(RuntimeError, match="fit"):
            InsightRecommender().recommend()

    def test_fit_from_path_and_recommend(self, weather_csv):
        est = InsightRecommender(top_r=5, top_k=2).fit(weather_csv)
        recs = est.recommend()
        assert len(recs.rows) <= 5
        doc = est.recommend_dict(attributes=["temp"])
        assert doc["rows"]

    def test_fit_from_dataset_object(self):
        ds, planted = outlier_heavy_dataset(n=900)
        est = InsightRecommender().fit(ds)
        assert est.recommend().rows


class TestDataFrame:
    def test_dataset_from_dataframe(self):
        rng = np.random.default_rng(2)
        df = pd.DataFrame(
            {
                "when": pd.date_range("2020-01-01", periods=40),
                "v": rng.normal(size=40),
                "g": ["a", "b"] * 20,
            }
        )
        ds = dataset_from_dataframe(df)
        assert ds.column("when").attr_type is AttributeType.T
        assert ds.column("v").attr_type is AttributeType.N
        assert ds.column("g").attr_type is AttributeType.C
        assert analyze(ds).recommendations().rows

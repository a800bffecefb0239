"""Acceptance gate: one test per release criterion, each printing a
PASS/FAIL line so the suite output doubles as the sign-off checklist.
"""
import json
import time

import numpy as np
import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from insightrank.cli import cli
from insightrank.config import EngineConfig
from insightrank.dataset import AttributeType, CombinationSpec
from insightrank.engine import analyze, recommendations_to_json
from insightrank.methods import (
    cramers_v,
    mahalanobis_scores,
    mann_kendall_score,
    pearson_correlation,
    spearman_correlation,
    zscore_outlier_scores,
)
from insightrank.methods.catalog import MethodOutput
from insightrank.ranking import (
    InsightCandidate,
    InsightTypeRow,
    aggregate_phi,
    average_point_ranks,
    group_minmax,
    kendall_tau,
    rank_insight_types,
    rank_insights,
)
from insightrank.service import create_app

from conftest import (
    correlation_heavy_dataset,
    outlier_heavy_dataset,
    trend_spike_dataset,
    write_weather_csv,
)

N, C, T = AttributeType.N, AttributeType.C, AttributeType.T


def _report(name, ok):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}")
    assert ok, name


def _cand(sig, names, score=0.0, penalized=0.0, type_id="t"):
    c = InsightCandidate(
        insight_type_id=type_id,
        combination=CombinationSpec(tuple(sig), tuple(names)),
        method_outputs=[],
        penalized_phi=penalized,
    )
    c.group_normalized_score = score
    return c


def _random_pool(rng, sigs, max_size=12, discrete_scores=True):
    size = int(rng.integers(1, max_size + 1))
    pool = []
    for i in range(size):
        sig = sigs[int(rng.integers(0, len(sigs)))]
        names = tuple(sorted(f"c{rng.integers(0, 50)}_{i}_{k}" for k in range(len(sig))))
        score = (
            float(rng.choice([0.0, 0.25, 0.5, 1.0]))
            if discrete_scores
            else float(rng.random())
        )
        pool.append(_cand(sig, names, score=score))
    return pool


def _oracle_rank_insights(cands, sig_order):
    """Brute-force reference: score-descending, ties round-robin across
    signatures in catalog order, members per signature in name order."""
    pos = {tuple(s): i for i, s in enumerate(sig_order)}
    out = []
    for score in sorted({c.group_normalized_score for c in cands}, reverse=True):
        tie = [c for c in cands if c.group_normalized_score == score]
        queues = {}
        for c in sorted(tie, key=lambda c: c.combination.column_names):
            queues.setdefault(c.combination.signature, []).append(c)
        sig_sorted = sorted(queues, key=lambda s: (pos.get(s, len(pos)), s))
        while any(queues.values()):
            for s in sig_sorted:
                if queues[s]:
                    out.append(queues[s].pop(0))
    return out


class TestAcceptance:
    def test_ranking_oracle_equivalence(self):
        sigs = [(N,), (N, N), (C, C), (T, N)]
        rng = np.random.default_rng(0)
        t0 = time.perf_counter()
        ok = True
        for trial in range(1000):
            pool = _random_pool(rng, sigs)
            got = rank_insights(pool, sigs)
            want = _oracle_rank_insights(pool, sigs)
            if [id(c) for c in got] != [id(c) for c in want]:
                ok = False
                break
            # insight-type ranking vs a plain stable sort on catalog-ordered rows
            rows = [
                InsightTypeRow(f"type{i}", float(rng.choice([0.1, 0.5, 0.9])), [], 1)
                for i in range(int(rng.integers(1, 8)))
            ]
            order = {r.insight_type_id: i for i, r in enumerate(rows)}
            got_rows = rank_insight_types(list(rows), order)
            want_rows = sorted(rows, key=lambda r: -r.psi)  # stable
            if [r.insight_type_id for r in got_rows] != [
                r.insight_type_id for r in want_rows
            ]:
                ok = False
                break
        elapsed = time.perf_counter() - t0
        _report(
            f"ranking oracle equivalence (1000 pools, {elapsed:.2f}s)",
            ok and elapsed < 5.0,
        )

    def test_insight_score_hand_check(self):
        # worked example: one method marks 5 points at 1.0, the other reports
        # a single 0 -> phi = (1 + 0) / 2 = 0.5
        ok = (
            abs(
                aggregate_phi(
                    [
                        MethodOutput("a", "per_point", np.ones(5)),
                        MethodOutput("b", "per_point", np.zeros(1)),
                    ]
                )
                - 0.5
            )
            < 1e-12
        )
        rng = np.random.default_rng(1)
        for _ in range(100):
            n_methods = int(rng.integers(1, 7))
            score_sets = [rng.random(int(rng.integers(1, 30))) for _ in range(n_methods)]
            outputs = [
                MethodOutput(f"m{i}", "per_point", s) for i, s in enumerate(score_sets)
            ]
            # independent direct evaluation: mean over methods of per-method mean
            direct = 0.0
            for s in score_sets:
                direct += sum(s) / len(s)
            direct /= n_methods
            if abs(aggregate_phi(outputs) - direct) >= 1e-12:
                ok = False
                break
        _report("insight score hand-check (worked example + 100 random)", ok)

    def test_point_rank_hand_check(self):
        from insightrank.dataset import CombinationMatrix

        def cand_with(outputs, n):
            c = _cand([N], ["v"])
            c.matrix = CombinationMatrix(
                spec=c.combination,
                columns=[np.arange(float(n))],
                kept_row_indices=np.arange(n),
                categories=[None],
            )
            c.method_outputs = list(outputs)
            return c

        # two methods over three rows: ranks (1,2,3) and (2,1,3) -> [1.5, 1.5, 3]
        c = cand_with(
            [
                MethodOutput("m1", "per_point", np.array([0.9, 0.5, 0.1])),
                MethodOutput("m2", "per_point", np.array([0.5, 0.9, 0.1])),
            ],
            3,
        )
        agg = average_point_ranks(c)
        ok = [agg.avg_rank_per_row[i] for i in range(3)] == [1.5, 1.5, 3.0]
        rng = np.random.default_rng(2)
        for _ in range(100):
            n = int(rng.integers(2, 40))
            outs = [
                MethodOutput(f"m{i}", "per_point", rng.permutation(n).astype(float))
                for i in range(int(rng.integers(1, 6)))
            ]
            agg = average_point_ranks(cand_with(outs, n))
            mean_rank = float(np.mean(list(agg.avg_rank_per_row.values())))
            if abs(mean_rank - (n + 1) / 2) >= 1e-9:
                ok = False
                break
        _report("point rank hand-check (worked example + mean-rank invariant)", ok)

    def test_diversity_guarantee(self):
        sigs = [(N,), (N, N), (C, C), (T, N)]
        rng = np.random.default_rng(3)
        violations = 0
        for _ in range(200):
            pool = _random_pool(rng, sigs, max_size=20)
            for c in pool:
                c.penalized_phi = float(rng.random())  # distinct w.p. 1
            group_minmax(pool)
            ranked = rank_insights(pool, sigs)
            populated = {c.combination.signature for c in pool}
            top = ranked[: len(populated)]
            if {c.combination.signature for c in top} != populated:
                violations += 1
                continue
            for sig in populated:
                tops = [
                    c
                    for c in pool
                    if c.combination.signature == sig and c.group_normalized_score == 1.0
                ]
                if len(tops) != 1:
                    violations += 1
        _report(f"diversity guarantee (200 pools, {violations} violations)", violations == 0)

    def test_type_ordering_in_emitted_recommendations(self):
        datasets = [
            outlier_heavy_dataset()[0],
            correlation_heavy_dataset(),
            trend_spike_dataset()[0],
        ]
        ok = True
        for ds in datasets:
            recs = analyze(ds).recommendations(top_r=20)
            psis = [r.psi for r in recs.rows]
            if psis != sorted(psis, reverse=True):
                ok = False
        _report("insight-type rows emitted in descending score order", ok)

    def test_planted_bivariate_outliers_recovered(self):
        t0 = time.perf_counter()
        ds, planted = outlier_heavy_dataset()
        recs = analyze(ds).recommendations(top_r=20)
        row = next(r for r in recs.rows if r.insight_type_id == "two_variable_outliers")
        top = row.ranked_candidates[0]
        ranked_rows = sorted(
            top.point_ranks.avg_rank_per_row.items(), key=lambda kv: (kv[1], kv[0])
        )
        found = {local for local, _ in ranked_rows[:5]}
        elapsed = time.perf_counter() - t0
        _report(
            f"planted outlier recovery ({elapsed:.2f}s)",
            found == set(planted) and elapsed < 10.0,
        )

    def test_planted_correlation_pair_is_rank_one(self):
        t0 = time.perf_counter()
        ds = correlation_heavy_dataset()
        recs = analyze(ds).recommendations(top_r=20)
        row = next(r for r in recs.rows if r.insight_type_id == "linear_correlation")
        got = row.ranked_candidates[0].combination.column_names
        elapsed = time.perf_counter() - t0
        _report(
            f"planted correlation pair rank-1 ({elapsed:.2f}s)",
            got == ("a", "b") and elapsed < 10.0,
        )

    def test_planted_timeseries_spikes_rank_top3(self):
        t0 = time.perf_counter()
        ds, _ = trend_spike_dataset()
        recs = analyze(ds).recommendations(top_r=20)
        order = [r.insight_type_id for r in recs.rows]
        elapsed = time.perf_counter() - t0
        _report(
            f"planted spike series: timeseries_outliers global rank "
            f"{order.index('timeseries_outliers') + 1} ({elapsed:.2f}s)",
            order.index("timeseries_outliers") < 3 and elapsed < 10.0,
        )

    def test_type_ranking_is_dataset_dependent(self):
        rank_a = [
            r.insight_type_id
            for r in analyze(outlier_heavy_dataset()[0]).recommendations(top_r=20).rows
        ]
        rank_b = [
            r.insight_type_id
            for r in analyze(correlation_heavy_dataset()).recommendations(top_r=20).rows
        ]
        union = sorted(set(rank_a[:5]) | set(rank_b[:5]))
        common = [t for t in union if t in rank_a and t in rank_b]
        tau = kendall_tau(
            [rank_a.index(t) for t in common], [rank_b.index(t) for t in common]
        )
        _report(f"dataset-dependent type ranking (tau = {tau:.2f})", tau < 0.5)

    def test_cli_determinism_and_worker_independence(self, tmp_path):
        csv_path = write_weather_csv(str(tmp_path / "weather.csv"), n=150)
        runner = CliRunner()
        a = runner.invoke(cli, ["analyze", csv_path, "--seed", "3"])
        b = runner.invoke(cli, ["analyze", csv_path, "--seed", "3"])
        ok = a.exit_code == b.exit_code == 0 and a.output == b.output
        for workers in (1, 6):
            cfg = tmp_path / f"cfg{workers}.json"
            cfg.write_text(json.dumps({"seed": 3, "workers": workers}))
            res = runner.invoke(cli, ["analyze", csv_path, "--config", str(cfg)])
            ok = ok and res.exit_code == 0 and res.output == a.output
        _report("byte-identical CLI output across runs and worker counts", ok)

    def test_scale_invariance_suite(self):
        rng = np.random.default_rng(4)
        n = 200
        x, y, z = rng.normal(size=n), rng.normal(size=n), rng.normal(size=n)
        t = 1.4e9 + 86400.0 * np.arange(n)
        cx, cy = rng.integers(0, 3, size=n), rng.integers(0, 4, size=n)
        scale = lambda v: 137.5 * v - 42.0  # noqa: E731
        checks = [
            abs(pearson_correlation(x, y) - pearson_correlation(scale(x), scale(y))),
            abs(spearman_correlation(x, y) - spearman_correlation(scale(x), scale(y))),
            abs(mann_kendall_score(t, x)[0] - mann_kendall_score(t, scale(x))[0]),
            abs(cramers_v(cx, cy) - cramers_v(cx, cy)),
            float(
                np.max(np.abs(zscore_outlier_scores(x) - zscore_outlier_scores(scale(x))))
            ),
            float(
                np.max(
                    np.abs(
                        mahalanobis_scores([x, y, z])
                        - mahalanobis_scores([scale(x), scale(y), z])
                    )
                )
            ),
        ]
        worst = max(checks)
        _report(f"scale invariance suite (worst delta {worst:.2e})", worst < 1e-9)

    def test_service_round_trip(self, tmp_path):
        csv_path = write_weather_csv(str(tmp_path / "weather.csv"), n=120)
        data_dir = str(tmp_path / "data")
        client = TestClient(create_app(data_dir))
        with open(csv_path, "rb") as fh:
            dsid = client.post(
                "/datasets", files={"file": ("w.csv", fh, "text/csv")}
            ).json()["dataset_id"]
        doc = client.get(f"/datasets/{dsid}/recommendations").json()
        ok = bool(doc["rows"])
        filt = client.get(
            f"/datasets/{dsid}/recommendations", params={"attributes": "temp"}
        ).json()
        for row in filt["rows"]:
            for ins in row["insights"]:
                ok = ok and "temp" in ins["combination"]["columns"]
        row = doc["rows"][0]
        bm = client.post(
            "/bookmarks",
            json={
                "dataset_id": dsid,
                "insight_type_id": row["insight_type"],
                "combination": row["insights"][0]["combination"],
            },
        ).json()
        ok = ok and "id" in bm
        restarted = TestClient(create_app(data_dir))
        listed = restarted.get("/bookmarks", params={"dataset_id": dsid}).json()
        ok = ok and any(b["id"] == bm["id"] for b in listed)
        ok = ok and restarted.get(f"/datasets/{dsid}/recommendations").json()["rows"]
        _report("service round-trip with restart persistence", bool(ok))

"""Insight scoring and ranking.

Pipeline per candidate: normalize each method output to [0,1], average the
per-method means into the insight score phi, apply the arity penalty, then
min-max normalize within each (insight-type, signature) group so every
signature is guaranteed a 1.0 representative (diverse ranking).  Insight
types are scored by the mean penalized phi of their candidate pool and
sorted descending.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .dataset import CombinationMatrix, CombinationSpec
from .methods.catalog import MethodOutput, Signature
from .methods.outliers import MethodError


class RankingError(ValueError):
    pass


@dataclass
class PointRankAggregate:
    avg_rank_per_row: Dict[int, float]  # local row position -> average rank
    contributing_method_ids: List[str]


@dataclass
class InsightCandidate:
    insight_type_id: str
    combination: CombinationSpec
    method_outputs: List[MethodOutput]
    matrix: Optional[CombinationMatrix] = None
    phi: float = 0.0
    penalized_phi: float = 0.0
    group_normalized_score: float = 0.0
    point_ranks: Optional[PointRankAggregate] = None
    metadata: dict = field(default_factory=dict)


@dataclass
class InsightTypeRow:
    insight_type_id: str
    psi: float
    ranked_candidates: List[InsightCandidate]
    candidate_pool_size: int


@dataclass
class Recommendations:
    rows: List[InsightTypeRow]
    top_r: int
    top_k: int
    dataset_name: str
    config_fingerprint: str


# ---------------------------------------------------------------------------

def normalize_method_output(out: MethodOutput) -> MethodOutput:
    """Min-max normalize per-point/subset scores; validate scalar range."""
    if out.shape == "scalar":
        v = float(out.scores[0])
        if v < -1e-12 or v > 1.0 + 1e-12:
            raise MethodError(f"{out.method_id}: scalar score {v} outside [0,1]")
        return replace(out, scores=np.array([min(1.0, max(0.0, v))]))
    s = out.scores
    if len(s) == 0:
        return out
    lo, hi = float(s.min()), float(s.max())
    if hi == lo:
        return replace(out, scores=np.zeros_like(s))
    return replace(out, scores=(s - lo) / (hi - lo))


def aggregate_phi(outputs: Sequence[MethodOutput]) -> float:
    """Mean over methods of the per-method mean score.

    Expects normalized outputs (each method's own score count weights its
    mean, so methods with different output sizes contribute equally).  An
    empty subset output contributes 0.  Single pass, O(1) state per output.
    """
    if not outputs:
        raise RankingError("no method outputs")
    total = 0.0
    for out in outputs:
        if len(out.scores) == 0:
            continue  # contributes 0 with n_i treated as 1
        total += float(out.scores.mean())
    return total / len(outputs)


def complexity_penalty(phi: float, arity: int, penalty_lambda: float = 0.9) -> float:
    """phi * lambda^(arity-2) beyond two attributes; identity otherwise."""
    if not (0.0 < penalty_lambda <= 1.0):
        raise RankingError("penalty_lambda must be in (0, 1]")
    if arity <= 2:
        return phi
    return phi * penalty_lambda ** (arity - 2)


def group_minmax(cands: List[InsightCandidate]) -> None:
    """Min-max normalize penalized_phi within each (type, signature) group.

    Singleton or constant groups map to 1.0 so every populated signature
    keeps a top-scored representative.
    """
    groups: Dict[Tuple[str, Signature], List[InsightCandidate]] = {}
    for c in cands:
        groups.setdefault((c.insight_type_id, c.combination.signature), []).append(c)
    for members in groups.values():
        vals = [c.penalized_phi for c in members]
        lo, hi = min(vals), max(vals)
        if hi == lo:
            for c in members:
                c.group_normalized_score = 1.0
        else:
            for c in members:
                c.group_normalized_score = (c.penalized_phi - lo) / (hi - lo)


def rank_insights(
    cands: List[InsightCandidate], signature_order: Sequence[Signature]
) -> List[InsightCandidate]:
    """Sort by group score descending; ties round-robin across signatures
    (catalog order), then lexicographic column names.  Guarantees the top c
    positions hold c distinct signatures when c signatures are populated.
    """
    sig_pos = {tuple(s): i for i, s in enumerate(signature_order)}
    by_score: Dict[float, List[InsightCandidate]] = {}
    for c in cands:
        by_score.setdefault(c.group_normalized_score, []).append(c)
    ordered: List[InsightCandidate] = []
    for score in sorted(by_score, reverse=True):
        tie = by_score[score]
        per_sig: Dict[Signature, List[InsightCandidate]] = {}
        for c in tie:
            per_sig.setdefault(c.combination.signature, []).append(c)
        keyed = []
        for sig, members in per_sig.items():
            members.sort(key=lambda c: c.combination.column_names)
            for j, c in enumerate(members):
                keyed.append((j, sig_pos.get(sig, len(sig_pos)), c.combination.column_names, c))
        keyed.sort(key=lambda t: t[:3])
        ordered.extend(c for *_, c in keyed)
    return ordered


def _competition_ranks(scores: np.ndarray) -> np.ndarray:
    """Descending competition ranking ("1224"): equal scores share the
    smallest applicable rank."""
    ranks = np.empty(len(scores))
    for i, s in enumerate(scores):
        ranks[i] = 1 + int((scores > s).sum())
    return ranks


def average_point_ranks(cand: InsightCandidate) -> Optional[PointRankAggregate]:
    """Average each row's rank across point-level method outputs.

    Subset outputs rank their members 1..n_i and give every absent row rank
    n_i + 1.  Scalar (and empty subset) outputs are excluded; with no
    point-level output at all the aggregate is absent.
    """
    if cand.matrix is None:
        return None
    n = cand.matrix.n_rows
    sums = np.zeros(n)
    used: List[str] = []
    for out in cand.method_outputs:
        norm = normalize_method_output(out)
        if norm.shape == "per_point":
            sums += _competition_ranks(norm.scores)
            used.append(out.method_id)
        elif norm.shape == "subset" and len(norm.scores) > 0:
            n_i = len(norm.scores)
            ranks = np.full(n, float(n_i + 1))
            member_ranks = _competition_ranks(norm.scores)
            for rid, r in zip(norm.row_ids, member_ranks):
                ranks[rid] = min(ranks[rid], r)
            sums += ranks
            used.append(out.method_id)
    if not used:
        return None
    avg = sums / len(used)
    return PointRankAggregate(
        avg_rank_per_row={int(i): float(avg[i]) for i in range(n)},
        contributing_method_ids=used,
    )


def score_insight_type(pool: Sequence[InsightCandidate]) -> float:
    """Mean penalized phi over the full candidate pool (absolute scale)."""
    if not pool:
        raise RankingError("empty pool")
    return float(np.mean([c.penalized_phi for c in pool]))


def rank_insight_types(
    rows: List[InsightTypeRow], catalog_order: Dict[str, int]
) -> List[InsightTypeRow]:
    """Sort descending by psi; ties keep catalog order."""
    return sorted(
        rows, key=lambda r: (-r.psi, catalog_order.get(r.insight_type_id, len(catalog_order)))
    )


def kendall_tau(rank_a: Sequence, rank_b: Sequence) -> float:
    """tau_a = (concordant - discordant) / (n(n-1)/2); no ties expected."""
    if len(rank_a) != len(rank_b):
        raise RankingError("length mismatch")
    n = len(rank_a)
    if n < 2:
        raise RankingError("need length >= 2")
    concordant = discordant = 0
    for i in range(n):
        for j in range(i + 1, n):
            da = (rank_a[i] > rank_a[j]) - (rank_a[i] < rank_a[j])
            db = (rank_b[i] > rank_b[j]) - (rank_b[i] < rank_b[j])
            prod = da * db
            if prod > 0:
                concordant += 1
            elif prod < 0:
                discordant += 1
    return (concordant - discordant) / (n * (n - 1) / 2)

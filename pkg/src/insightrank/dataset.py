"""CSV ingestion, column type inference, sampling and attribute-combination
enumeration.

Columns are stored as numpy arrays: numerical and temporal columns as float64
(NaN = missing, temporal values are epoch seconds), categorical columns as
int64 category codes (-1 = missing) plus an interned category list.
"""
from __future__ import annotations

import csv
import itertools
import random
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import EngineConfig


class DatasetError(ValueError):
    """Raised for malformed input files or degenerate columns."""


class AttributeType(str, Enum):
    N = "N"  # numerical
    C = "C"  # categorical
    T = "T"  # temporal


@dataclass
class Column:
    name: str
    attr_type: Optional[AttributeType]  # None = excluded (categorical overflow)
    values: np.ndarray
    null_fraction: float
    categories: Optional[List[str]] = None  # categorical only

    @property
    def excluded(self) -> bool:
        return self.attr_type is None


@dataclass
class Dataset:
    name: str
    columns: List[Column]
    row_count: int
    # original row ids, retained through sampling for annotation back-reference
    row_ids: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.row_ids is None:
            self.row_ids = np.arange(self.row_count, dtype=np.int64)
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise DatasetError("duplicate column names")
        for c in self.columns:
            if len(c.values) != self.row_count:
                raise DatasetError(f"column {c.name} length != row_count")

    @property
    def column_count(self) -> int:
        return len(self.columns)

    def column(self, name: str) -> Column:
        for c in self.columns:
            if c.name == name:
                return c
        raise KeyError(name)

    def columns_of_type(self, t: AttributeType) -> List[int]:
        return [i for i, c in enumerate(self.columns) if c.attr_type == t]

    def schema(self) -> List[dict]:
        return [
            {
                "name": c.name,
                "attr_type": c.attr_type.value if c.attr_type else "excluded",
                "null_fraction": round(c.null_fraction, 6),
            }
            for c in self.columns
        ]


@dataclass(frozen=True)
class CombinationSpec:
    signature: Tuple[AttributeType, ...]
    column_names: Tuple[str, ...]

    def __post_init__(self):
        if len(self.signature) != len(self.column_names):
            raise DatasetError("signature/column length mismatch")

    def to_dict(self) -> dict:
        return {
            "signature": [t.value for t in self.signature],
            "columns": list(self.column_names),
        }


@dataclass
class CombinationMatrix:
    """One attribute combination restricted to rows with no missing member."""

    spec: CombinationSpec
    columns: List[np.ndarray]  # aligned with spec.signature, missing-free
    kept_row_indices: np.ndarray  # positions into the (sampled) dataset
    categories: List[Optional[List[str]]]  # per column, categorical only

    @property
    def n_rows(self) -> int:
        return len(self.kept_row_indices)


# ---------------------------------------------------------------------------
# type inference

_DATE_FORMATS = ("%Y-%m-%d",)


def _parse_timestamp(cell: str) -> Optional[float]:
    s = cell.strip()
    if not s:
        return None
    if s.endswith("Z"):
        s = s[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(s)
    except ValueError:
        return None
    # fromisoformat accepts bare times in 3.11+; require a date part
    if "-" not in s[:8] and "/" not in s[:8]:
        return None
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp()


def _parse_number(cell: str) -> Optional[float]:
    try:
        v = float(cell)
    except ValueError:
        return None
    return v if np.isfinite(v) else None


def infer_attribute_type(
    values: Sequence[str], config: EngineConfig, row_count: Optional[int] = None
) -> Optional[AttributeType]:
    """Infer N/C/T from raw text cells.

    Returns None for a categorical column whose cardinality exceeds the cap
    (excluded from combinations).  Raises DatasetError when all cells are
    empty.
    """
    nonempty = [v for v in values if v is not None and v.strip() != ""]
    if not nonempty:
        raise DatasetError("untyped column: all cells empty")
    n = len(nonempty)
    ts_hits = sum(1 for v in nonempty if _parse_timestamp(v) is not None)
    if ts_hits / n >= 0.95:
        return AttributeType.T
    num_hits = sum(1 for v in nonempty if _parse_number(v) is not None)
    if num_hits / n >= 0.95:
        return AttributeType.N
    rc = row_count if row_count is not None else len(values)
    cap = min(config.cardinality_cap, max(1, rc // 2))
    if len(set(nonempty)) <= cap:
        return AttributeType.C
    return None  # categorical overflow


def _build_column(name: str, raw: List[str], config: EngineConfig, row_count: int) -> Column:
    attr = infer_attribute_type(raw, config, row_count)
    n = len(raw)
    if attr is AttributeType.N or attr is AttributeType.T:
        parse = _parse_number if attr is AttributeType.N else _parse_timestamp
        vals = np.full(n, np.nan)
        for i, cell in enumerate(raw):
            if cell is None or cell.strip() == "":
                continue
            v = parse(cell)
            if v is not None:
                vals[i] = v
        null_frac = float(np.isnan(vals).sum()) / n
        return Column(name, attr, vals, null_frac)
    # categorical (or overflow: keep raw labels but mark excluded)
    cats: List[str] = []
    index = {}
    codes = np.full(n, -1, dtype=np.int64)
    for i, cell in enumerate(raw):
        if cell is None or cell.strip() == "":
            continue
        key = cell.strip()
        if key not in index:
            index[key] = len(cats)
            cats.append(key)
        codes[i] = index[key]
    null_frac = float((codes == -1).sum()) / n
    return Column(name, attr, codes, null_frac, categories=cats)


def load_csv(path: str, config: Optional[EngineConfig] = None, name: Optional[str] = None) -> Dataset:
    """Load an RFC-4180 CSV with a header row; empty string = missing."""
    config = config or EngineConfig()
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            rows = list(reader)
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise DatasetError("empty file")
    header, data = rows[0], rows[1:]
    if len(set(header)) != len(header):
        raise DatasetError("duplicate headers")
    data = [r for r in data if any(cell.strip() for cell in r)]
    if not data:
        raise DatasetError("zero data rows")
    n = len(data)
    columns = []
    for j, col_name in enumerate(header):
        raw = [row[j] if j < len(row) else "" for row in data]
        columns.append(_build_column(col_name, raw, config, n))
    ds_name = name or str(path)
    return Dataset(name=ds_name, columns=columns, row_count=n)


# ---------------------------------------------------------------------------
# sampling

def sample_rows(ds: Dataset, max_rows: int, seed: int) -> Dataset:
    """Uniform reservoir sample of exactly max_rows rows (identity if small).

    Deterministic under (seed, input order); original row ids are retained.
    """
    if max_rows < 100:
        raise DatasetError("max_rows must be >= 100")
    if ds.row_count <= max_rows:
        return ds
    rng = random.Random(seed)
    reservoir = list(range(max_rows))
    for i in range(max_rows, ds.row_count):
        j = rng.randrange(i + 1)
        if j < max_rows:
            reservoir[j] = i
    keep = np.array(sorted(reservoir), dtype=np.int64)
    columns = [
        Column(c.name, c.attr_type, c.values[keep], c.null_fraction, c.categories)
        for c in ds.columns
    ]
    return Dataset(name=ds.name, columns=columns, row_count=max_rows, row_ids=ds.row_ids[keep])


# ---------------------------------------------------------------------------
# combination enumeration

def enumerate_combinations(
    ds: Dataset,
    signature: Sequence[AttributeType],
    cap: int,
    min_rows: int = 8,
) -> List[CombinationMatrix]:
    """All distinct column subsets matching the signature, canonical order.

    Same-type slots use unordered column combinations in dataset column
    order, so symmetric signatures never emit a duplicate.  Truncated to the
    first `cap` in lexicographic column-index order; combinations with fewer
    than `min_rows` rows after missing-row drops are skipped.
    """
    if not (1 <= len(signature) <= 4):
        raise DatasetError("signature length must be 1..4")
    sig = tuple(signature)
    # choose per type, then weave back into signature slot order
    by_type = {}
    for t in sig:
        by_type[t] = by_type.get(t, 0) + 1
    per_type_choices = {}
    for t, k in by_type.items():
        idxs = ds.columns_of_type(t)
        per_type_choices[t] = list(itertools.combinations(idxs, k))
    combos: List[Tuple[int, ...]] = []
    types_in_order = list(by_type)
    for picked in itertools.product(*(per_type_choices[t] for t in types_in_order)):
        pools = {t: list(p) for t, p in zip(types_in_order, picked)}
        cols = tuple(pools[t].pop(0) for t in sig)
        combos.append(cols)
    combos.sort()
    out: List[CombinationMatrix] = []
    for cols in combos:
        if len(out) >= cap:
            break
        mat = _materialize(ds, sig, cols, min_rows)
        if mat is not None:
            out.append(mat)
    return out


def _materialize(
    ds: Dataset, sig: Tuple[AttributeType, ...], col_idxs: Tuple[int, ...], min_rows: int
) -> Optional[CombinationMatrix]:
    cols = [ds.columns[i] for i in col_idxs]
    mask = np.ones(ds.row_count, dtype=bool)
    for c in cols:
        if c.attr_type is AttributeType.C:
            mask &= c.values != -1
        else:
            mask &= ~np.isnan(c.values)
    keep = np.flatnonzero(mask)
    if len(keep) < min_rows:
        return None
    spec = CombinationSpec(signature=sig, column_names=tuple(c.name for c in cols))
    return CombinationMatrix(
        spec=spec,
        columns=[c.values[keep] for c in cols],
        kept_row_indices=keep,
        categories=[c.categories for c in cols],
    )

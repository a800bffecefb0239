"""Engine configuration shared by the library, CLI and HTTP service."""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from typing import Any, Dict


class ConfigError(ValueError):
    """Raised when a config document is malformed."""


@dataclass
class EngineConfig:
    # ingestion
    max_rows: int = 10_000
    seed: int = 0
    cardinality_cap: int = 50
    combination_cap: int = 200
    min_rows: int = 8
    # ranking
    top_r: int = 10
    top_k: int = 5
    penalty_lambda: float = 0.9
    # execution
    workers: int = 1
    max_marks: int = 5
    # per-method hyperparameter overrides: {method_id: {param: value}}
    methods: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    def __post_init__(self):
        if self.max_rows < 100:
            raise ConfigError("max_rows must be >= 100")
        if not (0.0 < self.penalty_lambda <= 1.0):
            raise ConfigError("penalty_lambda must be in (0, 1]")
        if self.top_r < 1 or self.top_k < 1:
            raise ConfigError("top_r and top_k must be >= 1")
        if self.min_rows < 2:
            raise ConfigError("min_rows must be >= 2")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    @classmethod
    def from_json(cls, path: str) -> "EngineConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(doc)

    @classmethod
    def from_dict(cls, doc: Dict[str, Any]) -> "EngineConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config document must be a JSON object")
        known = {f for f in cls.__dataclass_fields__}  # noqa: C401
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**doc)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    def method_params(self, method_id: str) -> Dict[str, Any]:
        return dict(self.methods.get(method_id, {}))

    def fingerprint(self) -> str:
        doc = asdict(self)
        doc.pop("workers")  # execution-only: results are identical at any width
        blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]

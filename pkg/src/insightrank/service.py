"""HTTP JSON API over the engine, with file-backed bookmark persistence.

Uploaded CSVs are analyzed synchronously (desk scale) and kept in memory;
the raw file is also written to the data directory so a restarted process
can lazily re-analyze.  Bookmarks live in an append-only JSON-lines journal
compacted on load.
"""
from __future__ import annotations

import json
import os
import threading
import uuid
from datetime import datetime, timezone
from typing import Dict, List, Optional

from fastapi import FastAPI, File, HTTPException, Query, UploadFile
from fastapi.responses import JSONResponse

from . import vizrec
from .config import EngineConfig
from .dataset import DatasetError, load_csv
from .engine import AnalysisResult, UnknownAttributeError, analyze, recommendations_to_dict


class BookmarkStore:
    """JSONL journal: one {op, bookmark} record per line, single writer."""

    def __init__(self, path: str):
        self.path = path
        self._lock = threading.Lock()
        self._bookmarks: Dict[str, dict] = {}
        self._load()

    def _load(self):
        if not os.path.exists(self.path):
            return
        ops = 0
        with open(self.path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                ops += 1
                if rec["op"] == "add":
                    self._bookmarks[rec["bookmark"]["id"]] = rec["bookmark"]
                elif rec["op"] == "delete":
                    self._bookmarks.pop(rec["id"], None)
        if ops > 2 * len(self._bookmarks) + 16:
            self._compact()

    def _compact(self):
        tmp = self.path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            for bm in self._bookmarks.values():
                fh.write(json.dumps({"op": "add", "bookmark": bm}, sort_keys=True) + "\n")
        os.replace(tmp, self.path)

    def _append(self, rec: dict):
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")

    def add(self, bookmark: dict) -> dict:
        with self._lock:
            self._bookmarks[bookmark["id"]] = bookmark
            self._append({"op": "add", "bookmark": bookmark})
        return bookmark

    def delete(self, bookmark_id: str) -> bool:
        with self._lock:
            if bookmark_id not in self._bookmarks:
                return False
            del self._bookmarks[bookmark_id]
            self._append({"op": "delete", "id": bookmark_id})
        return True

    def list(self, dataset_id: Optional[str] = None) -> List[dict]:
        with self._lock:
            items = list(self._bookmarks.values())
        if dataset_id is not None:
            items = [b for b in items if b["dataset_id"] == dataset_id]
        return sorted(items, key=lambda b: b["created_at"])


def create_app(data_dir: str, config: Optional[EngineConfig] = None) -> FastAPI:
    config = config or EngineConfig()
    os.makedirs(os.path.join(data_dir, "datasets"), exist_ok=True)
    store = BookmarkStore(os.path.join(data_dir, "bookmarks.jsonl"))
    results: Dict[str, AnalysisResult] = {}
    results_lock = threading.Lock()
    app = FastAPI(title="insightrank")

    def _error(status: int, error: str, detail: str = "") -> JSONResponse:
        return JSONResponse(status_code=status, content={"error": error, "detail": detail})

    def _get_result(dataset_id: str) -> AnalysisResult:
        with results_lock:
            res = results.get(dataset_id)
        if res is not None:
            return res
        path = os.path.join(data_dir, "datasets", f"{dataset_id}.csv")
        if not os.path.exists(path):
            raise HTTPException(status_code=404, detail=f"unknown dataset {dataset_id}")
        ds = load_csv(path, config, name=dataset_id)
        res = analyze(ds, config)
        with results_lock:
            results[dataset_id] = res
        return res

    @app.exception_handler(HTTPException)
    async def http_exc(request, exc: HTTPException):
        return _error(exc.status_code, exc.detail)

    @app.post("/datasets")
    async def upload_dataset(file: UploadFile = File(...)):
        body = await file.read()
        if not body.strip():
            raise HTTPException(status_code=400, detail="empty file")
        dataset_id = uuid.uuid4().hex[:12]  # re-uploads get a fresh id (no dedup)
        path = os.path.join(data_dir, "datasets", f"{dataset_id}.csv")
        with open(path, "wb") as fh:
            fh.write(body)
        try:
            ds = load_csv(path, config, name=dataset_id)
            res = analyze(ds, config)
        except DatasetError as exc:
            os.remove(path)
            raise HTTPException(status_code=400, detail=str(exc))
        with results_lock:
            results[dataset_id] = res
        return {"dataset_id": dataset_id, "status": "ready", "schema": ds.schema()}

    @app.get("/datasets/{dataset_id}/recommendations")
    def recommendations(
        dataset_id: str,
        attributes: Optional[str] = Query(default=None),
        top_r: int = Query(default=None),
        top_k: int = Query(default=None),
    ):
        res = _get_result(dataset_id)
        attrs = [a for a in (attributes or "").split(",") if a]
        try:
            recs = res.recommendations(attributes=attrs, top_r=top_r, top_k=top_k)
        except UnknownAttributeError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return recommendations_to_dict(recs)

    @app.post("/bookmarks")
    def create_bookmark(payload: dict):
        for key in ("dataset_id", "insight_type_id", "combination"):
            if key not in payload:
                raise HTTPException(status_code=422, detail=f"missing field {key}")
        res = _get_result(payload["dataset_id"])
        combo_cols = tuple(payload["combination"].get("columns", []))
        cand = next(
            (
                c
                for c in res.candidates
                if c.insight_type_id == payload["insight_type_id"]
                and c.combination.column_names == combo_cols
            ),
            None,
        )
        if cand is None:
            raise HTTPException(status_code=404, detail="unknown insight")
        chart = cand.metadata.get("chart")
        if chart is None:
            import dataclasses

            from .ranking import average_point_ranks

            cand = dataclasses.replace(cand, metadata=dict(cand.metadata))
            cand.point_ranks = average_point_ranks(cand)
            chart = vizrec.render_candidate(cand, max_marks=config.max_marks)
        bookmark = {
            "id": uuid.uuid4().hex[:12],
            "dataset_id": payload["dataset_id"],
            "insight_type_id": payload["insight_type_id"],
            "combination": cand.combination.to_dict(),
            "chart": chart.to_dict(),
            "created_at": datetime.now(timezone.utc).isoformat(),
        }
        return store.add(bookmark)

    @app.get("/bookmarks")
    def list_bookmarks(dataset_id: Optional[str] = Query(default=None)):
        return store.list(dataset_id)

    @app.delete("/bookmarks/{bookmark_id}")
    def delete_bookmark(bookmark_id: str):
        if not store.delete(bookmark_id):
            raise HTTPException(status_code=404, detail=f"unknown bookmark {bookmark_id}")
        return {"deleted": bookmark_id}

    return app


def main(port: int = 8000, data_dir: str = "./insightrank-data", config: Optional[EngineConfig] = None):
    import uvicorn

    uvicorn.run(create_app(data_dir, config), host="0.0.0.0", port=port)

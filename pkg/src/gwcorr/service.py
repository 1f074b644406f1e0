"""HTTP layer: dataset upload, schema listing, analysis runs, result retrieval.

Datasets live in an in-memory LRU store; analyses cache their full surface so
switching the displayed pair only re-serializes. Errors come back as JSON
``{"error_kind": ..., "message": ...}``.
"""

import os
import threading
import time
import uuid
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeoutError
from dataclasses import dataclass
from typing import Optional

import numpy as np
from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import engine, geodata
from .errors import GwError, InvalidSpecError, PairNotInSurfaceError, SpecMismatchError


@dataclass
class ServiceConfig:
    size_limit_bytes: int = 64 * 1024 * 1024
    timeout_seconds: float = 120.0
    dataset_capacity: int = 8
    analysis_capacity: int = 64
    tiles_url: str = ""
    ui_dir: Optional[str] = None

    @classmethod
    def from_env(cls) -> "ServiceConfig":
        cfg = cls()
        if "GWCORR_SIZE_LIMIT_MB" in os.environ:
            cfg.size_limit_bytes = int(float(os.environ["GWCORR_SIZE_LIMIT_MB"]) * 1024 * 1024)
        if "GWCORR_TIMEOUT_S" in os.environ:
            cfg.timeout_seconds = float(os.environ["GWCORR_TIMEOUT_S"])
        if "GWCORR_DATASET_CAPACITY" in os.environ:
            cfg.dataset_capacity = int(os.environ["GWCORR_DATASET_CAPACITY"])
        if "GWCORR_TILES_URL" in os.environ:
            cfg.tiles_url = os.environ["GWCORR_TILES_URL"]
        if "GWCORR_UI_DIR" in os.environ:
            cfg.ui_dir = os.environ["GWCORR_UI_DIR"]
        return cfg


class ApiError(Exception):
    def __init__(self, status: int, kind: str, message: str):
        super().__init__(message)
        self.status = status
        self.kind = kind
        self.message = message


class _LruStore:
    """Thread-safe LRU map of immutable records."""

    def __init__(self, capacity: int):
        self._capacity = max(1, capacity)
        self._items = OrderedDict()
        self._lock = threading.Lock()

    def put(self, key, value):
        with self._lock:
            self._items[key] = value
            self._items.move_to_end(key)
            while len(self._items) > self._capacity:
                self._items.popitem(last=False)

    def get(self, key):
        with self._lock:
            if key not in self._items:
                return None
            self._items.move_to_end(key)
            return self._items[key]


@dataclass
class _AnalysisRecord:
    dataset: geodata.Dataset
    surface: engine.GwSurface
    kept: np.ndarray
    displayed_pair: tuple
    summary: dict


class AnalysisRequest(BaseModel):
    dataset_id: str
    mode: str
    method: str
    var_a: str
    var_b: str
    controls: list = []
    kernel: str
    bandwidth_proportion: float
    displayed_pair: Optional[list] = None


def _parse_pair(raw: str) -> tuple:
    parts = raw.split(",")
    if len(parts) != 2 or not parts[0] or not parts[1]:
        raise ApiError(422, "InvalidSpec", f"pair must be 'a,b', got {raw!r}")
    return (parts[0], parts[1])


def create_app(config: Optional[ServiceConfig] = None) -> FastAPI:
    cfg = config or ServiceConfig()
    app = FastAPI(title="gwcorr", version="0.1.0")
    datasets = _LruStore(cfg.dataset_capacity)
    analyses = _LruStore(cfg.analysis_capacity)
    executor = ThreadPoolExecutor(max_workers=4, thread_name_prefix="gwcorr-compute")
    app.state.config = cfg

    @app.exception_handler(ApiError)
    async def _api_error(_req: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status,
                            content={"error_kind": exc.kind, "message": exc.message})

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_req: Request, exc: RequestValidationError):
        return JSONResponse(status_code=422,
                            content={"error_kind": "ValidationError", "message": str(exc.errors())})

    @app.get("/config")
    def get_config():
        return {"tiles_url": cfg.tiles_url, "version": app.version}

    @app.post("/datasets", status_code=201)
    async def upload_dataset(request: Request, x_col: Optional[str] = None,
                             y_col: Optional[str] = None, assume_planar: bool = False):
        body = await request.body()
        if len(body) > cfg.size_limit_bytes:
            raise ApiError(413, "PayloadTooLarge",
                           f"body exceeds the {cfg.size_limit_bytes} byte limit")
        ctype = request.headers.get("content-type", "").split(";")[0].strip().lower()
        try:
            if ctype == "text/csv":
                if not x_col or not y_col:
                    raise ApiError(400, "MissingColumn",
                                   "CSV uploads need x_col and y_col query parameters")
                ds = geodata.parse_point_csv(body, x_col, y_col, assume_planar)
            else:
                ds = geodata.parse_geojson(body, assume_planar)
        except GwError as err:
            raise ApiError(400, err.kind, str(err)) from err
        datasets.put(ds.id, ds)
        return {"dataset_id": ds.id, "n": ds.n, "geometry_kind": ds.geometry_kind,
                "schema": ds.schema.to_dict()}

    @app.get("/datasets/{dataset_id}/variables")
    def list_variables(dataset_id: str):
        ds = datasets.get(dataset_id)
        if ds is None:
            raise ApiError(404, "NotFound", f"no dataset {dataset_id!r}")
        return ds.schema.to_dict()

    @app.post("/analyses")
    def run_analysis(req: AnalysisRequest):
        ds = datasets.get(req.dataset_id)
        if ds is None:
            raise ApiError(404, "NotFound", f"no dataset {req.dataset_id!r}")
        spec = engine.AnalysisSpec(
            mode=req.mode, method=req.method, var_a=req.var_a, var_b=req.var_b,
            controls=tuple(str(c) for c in req.controls), kernel=req.kernel,
            bandwidth_proportion=req.bandwidth_proportion)
        try:
            spec.validate(ds.variable_names)
        except (InvalidSpecError, SpecMismatchError) as err:
            raise ApiError(422, err.kind, str(err)) from err
        if req.displayed_pair is None:
            displayed = (spec.var_a, spec.var_b)
        else:
            if len(req.displayed_pair) != 2:
                raise ApiError(422, "InvalidSpec", "displayed_pair must name two variables")
            displayed = (str(req.displayed_pair[0]), str(req.displayed_pair[1]))
            if displayed[0] == displayed[1] or not set(displayed) <= set(spec.variable_set):
                raise ApiError(422, "InvalidSpec",
                               "displayed_pair must be two distinct analysis variables")

        def job():
            dm, coords, kept = geodata.listwise_complete(ds, spec.variable_set)
            t0 = time.perf_counter()
            surface = engine.compute_surface(dm, coords, spec)
            wall_ms = (time.perf_counter() - t0) * 1000.0
            return surface, kept, wall_ms

        future = executor.submit(job)
        try:
            surface, kept, wall_ms = future.result(timeout=cfg.timeout_seconds)
        except FutureTimeoutError:
            raise ApiError(504, "Timeout",
                           f"analysis exceeded {cfg.timeout_seconds} s") from None
        except GwError as err:
            raise ApiError(422, err.kind, str(err)) from err

        analysis_id = uuid.uuid4().hex
        summary = engine.surface_summary(surface, displayed,
                                         n_dropped=ds.n - len(surface), wall_ms=wall_ms)
        summary = {"analysis_id": analysis_id, **summary}
        analyses.put(analysis_id, _AnalysisRecord(
            dataset=ds, surface=surface, kept=kept,
            displayed_pair=displayed, summary=summary))
        return {"analysis_id": analysis_id, "summary": summary}

    def _record(analysis_id: str) -> _AnalysisRecord:
        rec = analyses.get(analysis_id)
        if rec is None:
            raise ApiError(404, "NotFound", f"no analysis {analysis_id!r}")
        return rec

    @app.get("/analyses/{analysis_id}/result")
    def get_result(analysis_id: str, pair: Optional[str] = None):
        rec = _record(analysis_id)
        displayed = rec.displayed_pair if pair is None else _parse_pair(pair)
        try:
            doc = geodata.serialize_result(rec.dataset, rec.surface, displayed, rec.kept)
        except PairNotInSurfaceError as err:
            raise ApiError(422, err.kind, str(err)) from err
        return Response(content=geodata.document_to_json(doc),
                        media_type="application/geo+json")

    @app.get("/analyses/{analysis_id}/scatter")
    def get_scatter(analysis_id: str, pair: Optional[str] = None):
        rec = _record(analysis_id)
        displayed = rec.displayed_pair if pair is None else _parse_pair(pair)
        surface = rec.surface
        try:
            q = surface.pair_index(displayed[0], displayed[1])
        except PairNotInSurfaceError as err:
            raise ApiError(422, err.kind, str(err)) from err
        col_a = rec.dataset.variable_names.index(displayed[0])
        col_b = rec.dataset.variable_names.index(displayed[1])
        sig001 = engine.apply_significance_mask(surface, displayed, 0.01).significant
        sig005 = engine.apply_significance_mask(surface, displayed, 0.05).significant
        records = []
        for j, orig in enumerate(rec.kept):
            records.append({
                "index": int(orig),
                "value_a": geodata._jsonable(rec.dataset.values[orig, col_a]),
                "value_b": geodata._jsonable(rec.dataset.values[orig, col_b]),
                "coef": geodata._jsonable(surface.coefficients[j, q]),
                "pval": geodata._jsonable(surface.p_values[j, q]),
                "significant_at": {"0.01": bool(sig001[j]), "0.05": bool(sig005[j])},
            })
        return records

    @app.get("/analyses/{analysis_id}/summary")
    def get_summary(analysis_id: str):
        return _record(analysis_id).summary

    if cfg.ui_dir and os.path.isdir(cfg.ui_dir):
        app.mount("/", StaticFiles(directory=cfg.ui_dir, html=True), name="ui")

    return app

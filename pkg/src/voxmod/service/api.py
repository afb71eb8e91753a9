"""HTTP/JSON API over the pipeline (FastAPI).

Bodies are UTF-8 JSON except the multipart WAV upload and the raw model
upload. Auth is a single static bearer token when configured; anything
fancier is out of scope.
"""

from __future__ import annotations

import json

from fastapi import Depends, FastAPI, HTTPException, Query, Request, Response, UploadFile
from fastapi.responses import PlainTextResponse

from ..analytics import CostParams, InvalidParams, NoData, duration_bin
from ..classify import CorruptModel, VersionMismatch, dataset_to_csv
from ..moderation import (
    DuplicateAudio,
    InvalidMetadata,
    InvalidTransition,
    ItemState,
    UnknownItem,
)
from .pipeline import ModerationPipeline, SmokeTestFailed
from .serialize import (
    decision_from_json,
    item_to_json,
    metadata_from_json,
    timing_from_json,
)


def create_app(pipeline: ModerationPipeline) -> FastAPI:
    app = FastAPI(title="voxmod", version="0.1.0")
    token = pipeline.config.api_token

    async def require_token(request: Request):
        if token is None:
            return
        supplied = request.headers.get("authorization", "")
        if supplied != f"Bearer {token}":
            raise HTTPException(status_code=401, detail="missing or wrong API token")

    guarded = [Depends(require_token)]

    def item_view(item, with_spans: bool = True) -> dict:
        doc = item_to_json(item)
        doc["duration_bin"] = duration_bin(item.duration_s).label if item.duration_s > 0 else None
        if with_spans:
            doc["low_confidence_spans"] = [list(s) for s in pipeline.spans_for(item)]
        return doc

    @app.post("/items", dependencies=guarded, status_code=201)
    async def upload_item(file: UploadFile):
        wav_bytes = await file.read()
        try:
            item = pipeline.ingest_bytes(wav_bytes, audio_ref=file.filename or "upload.wav")
        except DuplicateAudio as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        processed = pipeline.process_item(item.id)
        return {"id": processed.id, "state": processed.state.value}

    @app.get("/items", dependencies=guarded)
    def list_items(
        state: str | None = Query(default=None),
        page: int = Query(default=1, ge=1),
        per_page: int = Query(default=20, ge=1, le=200),
    ):
        items = sorted(pipeline.store.moderation.items.values(), key=lambda i: i.id)
        if state is not None:
            try:
                wanted = ItemState(state)
            except ValueError:
                raise HTTPException(status_code=422, detail=f"unknown state {state!r}")
            items = [i for i in items if i.state == wanted]
        total = len(items)
        start = (page - 1) * per_page
        page_items = items[start : start + per_page]
        return {
            "total": total,
            "page": page,
            "per_page": per_page,
            "items": [item_view(i) for i in page_items],
        }

    @app.get("/items/{item_id}", dependencies=guarded)
    def get_item(item_id: str):
        try:
            item = pipeline.store.moderation.get(item_id)
        except UnknownItem:
            raise HTTPException(status_code=404, detail=f"no item {item_id}")
        return item_view(item)

    @app.get("/items/{item_id}/audio", dependencies=guarded)
    def get_audio(item_id: str):
        try:
            pipeline.store.moderation.get(item_id)
        except UnknownItem:
            raise HTTPException(status_code=404, detail=f"no item {item_id}")
        content = next(
            (h for h, iid in pipeline.store.moderation.hashes.items() if iid == item_id), None
        )
        blob = pipeline.store.blob_dir / f"{content}.wav" if content else None
        if blob is None or not blob.exists():
            raise HTTPException(status_code=404, detail="audio blob missing")
        return Response(content=blob.read_bytes(), media_type="audio/wav")

    @app.post("/items/{item_id}/decision", dependencies=guarded)
    def post_decision(item_id: str, body: dict):
        try:
            decision = decision_from_json(body["decision"])
            metadata = metadata_from_json(body.get("metadata", {}))
            timings = [timing_from_json(t) for t in body.get("timings", ())]
        except (KeyError, TypeError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=f"bad decision payload: {exc}")
        try:
            item = pipeline.decide(item_id, decision, metadata, timings)
        except UnknownItem:
            raise HTTPException(status_code=404, detail=f"no item {item_id}")
        except InvalidTransition as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except InvalidMetadata as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return item_view(item)

    @app.get("/reports/time-saving", dependencies=guarded)
    def time_saving(task: str = Query(default="gist")):
        try:
            report = pipeline.time_saving_report(task)
        except (NoData, ValueError) as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return {
            "task": report.task,
            "bins": {
                label: {
                    "avg_time_saved_s": stats.avg_time_saved_s,
                    "avg_time_taken_s": stats.avg_time_taken_s,
                    "n_with": stats.n_with,
                    "n_without": stats.n_without,
                }
                for label, stats in report.bins.items()
            },
        }

    @app.get("/reports/cost", dependencies=guarded)
    def cost(
        monthly_salary: float = 20000.0,
        weekly_hours: float = 48.0,
        items_per_hour: float = 15.0,
        overhead_ratio: float = 0.30,
        stt_unit_price: float = 0.29,
        stt_overhead_ratio: float = 0.30,
        time_saving_ratio: float = 0.40,
        stt_flat_cost: float | None = None,
    ):
        try:
            params = CostParams(
                monthly_salary=monthly_salary,
                weekly_hours=weekly_hours,
                items_per_hour=items_per_hour,
                overhead_ratio=overhead_ratio,
                stt_unit_price=stt_unit_price,
                stt_overhead_ratio=stt_overhead_ratio,
                time_saving_ratio=time_saving_ratio,
                stt_flat_cost=stt_flat_cost,
            )
            report = pipeline.cost_report(params)
        except InvalidParams as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {
            "per_item_manual_cost": report.per_item_manual_cost,
            "per_item_automated_labor_cost": report.per_item_automated_labor_cost,
            "per_item_stt_cost": report.per_item_stt_cost,
            "per_item_total_automated_cost": report.per_item_total_automated_cost,
            "cost_saving_ratio": report.cost_saving_ratio,
        }

    @app.get("/dashboard/locations", dependencies=guarded)
    def dashboard():
        return [
            {"state": c.state, "district": c.district, "category": c.category, "count": c.count}
            for c in pipeline.dashboard()
        ]

    @app.post("/models/{kind}", dependencies=guarded)
    async def swap_model(kind: str, request: Request):
        blob = await request.body()
        try:
            slot = pipeline.swap_model(kind, blob)
        except (CorruptModel, VersionMismatch) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except SmokeTestFailed as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return {"kind": kind, "version": slot.version}

    @app.get("/models", dependencies=guarded)
    def models():
        out = {}
        for kind in ("blank", "gender"):
            slot = pipeline.model(kind)
            entry = {
                "installed": slot is not None,
                "version": slot.version if slot else None,
                "last_evaluation": None,
            }
            if slot is not None:
                sidecar = pipeline.store.model_dir / f"{kind}-{slot.version[:16]}.model.metrics.json"
                if sidecar.exists():
                    entry["last_evaluation"] = json.loads(sidecar.read_text())
            out[kind] = entry
        return out

    @app.get("/feedback/export", dependencies=guarded, response_class=PlainTextResponse)
    def feedback_export(
        kind: str = Query(default="blank"),
        from_: str = Query(default="", alias="from"),
        to: str = Query(default="￿"),
    ):
        if kind not in ("blank", "gender"):
            raise HTTPException(status_code=422, detail=f"unknown classifier kind {kind!r}")
        try:
            export = pipeline.export_feedback(since=from_, until=to)
        except NoData as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        dataset = export.blank if kind == "blank" else export.gender
        if dataset is None:
            raise HTTPException(status_code=404, detail=f"no {kind} feedback rows in window")
        return PlainTextResponse(dataset_to_csv(dataset), media_type="text/csv")

    return app

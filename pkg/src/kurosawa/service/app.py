"""The workbench HTTP API.

Every endpoint lives under /api/v1 and delegates to the library modules; the
mapping from library error codes to HTTP statuses is the single table below,
which tests walk to keep it total.  Mutations are durable before the response
returns.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Any

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from ..dataset import (
    Dataset,
    DatasetRecord,
    FinetuneFormat,
    export_finetune,
    genre_distribution,
    prepare_record,
)
from ..errors import (
    DuplicateIdError,
    Issue,
    KurosawaError,
    MissingLongStorylineError,
    UnknownIdError,
)
from ..generation import (
    CompletionBackend,
    GenerationConfig,
    generate_plot,
    generate_scene,
)
from ..metrics import LIKERT_FEATURES, LikertRating, likert_summary, metric_report
from ..model import DEFAULT_GENRES, Scene
from ..plots import GenerationProfile, StorylineKind, validate_annotated_plot
from ..screenplay import decode_tagged, encode_tagged, parse_script, render_screenplay
from .config import ServiceConfig, make_backend
from .store import JsonlStore

__all__ = ["ERROR_STATUS", "create_app"]

API_PREFIX = "/api/v1"

# Library error code -> HTTP status. One row per error class; a test walks
# the exception hierarchy to keep this table total.
ERROR_STATUS: dict[str, int] = {
    "EmptyInput": 400,
    "NoElements": 400,
    "UnsupportedElement": 400,
    "UnbalancedTags": 400,
    "StrayText": 400,
    "EmptyElement": 400,
    "InvalidBoundaries": 400,
    "MissingTag": 400,
    "DuplicateTag": 400,
    "OutOfOrderTags": 400,
    "EmptyAct": 400,
    "LengthMismatch": 400,
    "EmptyCorpus": 400,
    "EmptySequence": 400,
    "EmptyList": 400,
    "PositiveLogProb": 400,
    "NoEligibleDocs": 400,
    "EmptyRatings": 400,
    "OutOfRangeScore": 400,
    "TargetParseFailure": 400,
    "LengthViolation": 400,
    "UnknownGenre": 400,
    "ManifestParse": 400,
    "ContextOverflow": 400,
    "UnknownId": 404,
    "DuplicateId": 409,
    "GenresRequired": 422,
    "GenresForbidden": 422,
    "MissingLongStoryline": 422,
    "MissingGenres": 422,
    "BackendUnavailable": 502,
    "BackendRejected": 502,
    "Timeout": 504,
    "CorruptRecord": 500,
    "StorageFull": 507,
    "Error": 500,
}


class ParseScriptBody(BaseModel):
    text: str
    title: str = ""
    layout: dict[str, Any] | None = None


class EncodeSceneBody(BaseModel):
    scene: dict[str, Any]


class DecodeSceneBody(BaseModel):
    text: str
    mode: str = "lenient"


class RenderSceneBody(BaseModel):
    scene: dict[str, Any]
    page_width: int = 60


class ValidatePlotBody(BaseModel):
    annotated: str


class GeneratePlotBody(BaseModel):
    storyline: str = ""
    long_storyline: str | None = None
    genres: list[str] = []
    profile: str = "AS"
    config: dict[str, Any] | None = None


class GenerateSceneBody(BaseModel):
    description: str
    config: dict[str, Any] | None = None


class CreateDatasetBody(BaseModel):
    name: str


class AddRecordBody(BaseModel):
    record: dict[str, Any]
    mode: str = "lenient"


class EvalReportBody(BaseModel):
    candidates: list[str]
    references: list[str]
    logprobs: list[float] | list[list[float]] | None = None


class RatingBody(BaseModel):
    item_id: str
    rater_id: str = "anonymous"
    scores: dict[str, int]


class ServiceState:
    """Store plus the in-memory views rebuilt from it at startup."""

    def __init__(self, config: ServiceConfig, backend: CompletionBackend, store: JsonlStore):
        self.config = config
        self.backend = backend
        self.store = store
        self.datasets: dict[str, Dataset] = {}
        self._replay_datasets()

    def _replay_datasets(self) -> None:
        for item in self.store.all_items("dataset"):
            event = item.payload.get("event")
            if event == "created":
                self.datasets[item.id] = Dataset(name=item.payload.get("name", item.id))
            elif event == "record_added":
                dataset = self.datasets.get(item.payload["dataset_id"])
                if dataset is None:
                    continue
                record = DatasetRecord.from_dict(item.payload["record"])
                dataset.records.append(record)
                stored = item.payload.get("warnings") or []
                if stored:
                    dataset.warnings[record.id] = [
                        Issue(w["code"], w["message"], w.get("detail") or {})
                        for w in stored
                    ]

    def dataset(self, dataset_id: str) -> Dataset:
        dataset = self.datasets.get(dataset_id)
        if dataset is None:
            raise UnknownIdError(dataset_id)
        return dataset

    def generation_config(self, overrides: dict[str, Any] | None) -> GenerationConfig:
        if not overrides:
            return self.config.generation
        base = self.config.generation.to_dict()
        base.update(overrides)
        return GenerationConfig(**base)


def _error_body(code: str, message: str, detail: dict | None = None) -> dict:
    return {"error": {"code": code, "message": message, "detail": detail or {}}}


def create_app(
    config: ServiceConfig | None = None,
    backend: CompletionBackend | None = None,
    store: JsonlStore | None = None,
) -> FastAPI:
    config = config or ServiceConfig()
    backend = backend or make_backend(config)
    store = store or JsonlStore(config.data_dir)
    state = ServiceState(config, backend, store)

    app = FastAPI(title="kurosawa workbench", docs_url=None, redoc_url=None)
    app.state.workbench = state
    if config.cors_origin:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=[config.cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(KurosawaError)
    async def _kurosawa_error(request: Request, exc: KurosawaError) -> JSONResponse:
        status = ERROR_STATUS.get(exc.code, 500)
        return JSONResponse(status_code=status, content=_error_body(exc.code, str(exc), exc.detail()))

    @app.exception_handler(RequestValidationError)
    async def _body_error(request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(status_code=400, content=_error_body("Validation", str(exc)))

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=400, content=_error_body("Validation", str(exc)))

    # ------------------------------------------------------------------ meta

    @app.get(API_PREFIX + "/healthz")
    def healthz() -> dict:
        ping = getattr(state.backend, "ping", None)
        reachable = bool(ping()) if callable(ping) else False
        return {"status": "ok", "backend_reachable": reachable}

    @app.get(API_PREFIX + "/genres")
    def genres() -> dict:
        return {"genres": list(DEFAULT_GENRES)}

    # ----------------------------------------------------------- screenplay

    @app.post(API_PREFIX + "/parse/script")
    def parse_script_endpoint(body: ParseScriptBody) -> dict:
        layout = state.config.layout
        if body.layout:
            try:
                layout = replace(layout, **body.layout)
            except TypeError as exc:
                raise ValueError(f"bad layout override: {exc}")
        result = parse_script(body.text, layout, title=body.title)
        return {
            "script": result.script.to_dict(),
            "warnings": [w.to_dict() for w in result.warnings],
            "scene_count": len(result.script.scenes),
        }

    @app.post(API_PREFIX + "/scenes/encode")
    def encode_scene(body: EncodeSceneBody) -> dict:
        try:
            scene = Scene.from_dict(body.scene)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed scene: {exc}")
        return {"text": encode_tagged(scene)}

    @app.post(API_PREFIX + "/scenes/decode")
    def decode_scene(body: DecodeSceneBody) -> dict:
        if body.mode not in ("strict", "lenient"):
            raise ValueError(f"unknown mode {body.mode!r}")
        decoded = decode_tagged(body.text, strict=body.mode == "strict")
        return {
            "scene": decoded.scene.to_dict(),
            "warnings": [w.to_dict() for w in decoded.warnings],
        }

    @app.post(API_PREFIX + "/scenes/render")
    def render_scene(body: RenderSceneBody) -> dict:
        try:
            scene = Scene.from_dict(body.scene)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed scene: {exc}")
        return {"text": render_screenplay(scene, page_width=body.page_width)}

    # ----------------------------------------------------------------- plots

    @app.post(API_PREFIX + "/plots/validate")
    def validate_plot(body: ValidatePlotBody):
        report = validate_annotated_plot(body.annotated)
        if report.errors:
            first = report.errors[0]
            content = _error_body(first.code, first.message, first.detail)
            content["report"] = report.to_dict()
            return JSONResponse(status_code=400, content=content)
        return {"report": report.to_dict()}

    @app.post(API_PREFIX + "/plots/generate")
    def plots_generate(body: GeneratePlotBody) -> dict:
        profile = GenerationProfile(body.profile)
        if profile.storyline_kind is StorylineKind.LONG:
            if not (body.long_storyline or "").strip():
                raise MissingLongStorylineError("request")
            storyline = body.long_storyline or ""
        else:
            storyline = body.storyline
        config = state.generation_config(body.config)
        result = generate_plot(storyline, list(body.genres), profile, state.backend, config)
        payload = {
            "storyline": storyline,
            "genres": list(body.genres),
            "profile": profile.value,
            "acts": result.acts.to_dict() if result.acts else None,
            "raw": result.raw.to_dict(),
            "report": result.report.to_dict(),
        }
        item = state.store.append("plot_generation", payload)
        return {"id": item.id, "created_at": item.created_at, **payload}

    # ---------------------------------------------------------------- scenes

    @app.post(API_PREFIX + "/scenes/generate")
    def scenes_generate(body: GenerateSceneBody) -> dict:
        config = state.generation_config(body.config)
        result = generate_scene(body.description, state.backend, config)
        payload = {
            "description": body.description,
            "scene": result.scene.to_dict() if result.scene else None,
            "raw": result.raw.to_dict(),
            "report": result.report.to_dict(),
        }
        item = state.store.append("scene_generation", payload)
        return {"id": item.id, "created_at": item.created_at, **payload}

    # -------------------------------------------------------------- datasets

    @app.post(API_PREFIX + "/datasets")
    def create_dataset(body: CreateDatasetBody) -> dict:
        if not body.name.strip():
            raise ValueError("dataset name must be non-empty")
        item = state.store.append("dataset", {"event": "created", "name": body.name})
        state.datasets[item.id] = Dataset(name=body.name)
        return {"id": item.id, "name": body.name}

    @app.post(API_PREFIX + "/datasets/{dataset_id}/records")
    def add_dataset_record(dataset_id: str, body: AddRecordBody) -> dict:
        dataset = state.dataset(dataset_id)
        try:
            record = DatasetRecord.from_dict(body.record)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed record: {exc}")
        if any(r.id == record.id for r in dataset.records):
            raise DuplicateIdError(record.id)
        record, warnings = prepare_record(record, dataset.vocabulary, body.mode)
        state.store.append("dataset", {
            "event": "record_added",
            "dataset_id": dataset_id,
            "record": record.to_dict(),
            "mode": body.mode,
            "warnings": [w.to_dict() for w in warnings],
        })
        dataset.records.append(record)
        if warnings:
            dataset.warnings[record.id] = warnings
        return {
            "dataset_id": dataset_id,
            "record_id": record.id,
            "size": len(dataset.records),
            "warnings": [w.to_dict() for w in warnings],
        }

    @app.get(API_PREFIX + "/datasets/{dataset_id}/export")
    def export_dataset(dataset_id: str, profile: str = "AS") -> dict:
        dataset = state.dataset(dataset_id)
        prof = GenerationProfile(profile)
        fmt = FinetuneFormat()
        records = export_finetune(dataset, prof, fmt)
        return {
            "profile": prof.value,
            "separator": fmt.separator,
            "stop": fmt.stop,
            "records": [{"prompt": r.prompt, "completion": r.completion} for r in records],
        }

    @app.get(API_PREFIX + "/datasets/{dataset_id}/stats")
    def dataset_stats(dataset_id: str) -> dict:
        dataset = state.dataset(dataset_id)
        return {
            "id": dataset_id,
            "name": dataset.name,
            "size": len(dataset.records),
            "genres": genre_distribution(dataset),
        }

    # ------------------------------------------------------------ evaluation

    @app.post(API_PREFIX + "/eval/report")
    def eval_report(body: EvalReportBody) -> dict:
        report = metric_report(body.candidates, body.references, body.logprobs)
        return {"report": report.to_dict(), "table": report.render_table()}

    # --------------------------------------------------------------- ratings

    @app.post(API_PREFIX + "/ratings")
    def add_rating(body: RatingBody) -> dict:
        state.store.get(body.item_id)  # 404 when the rated item is unknown
        missing = [f for f in LIKERT_FEATURES if f not in body.scores]
        if missing:
            raise ValueError(f"missing scores: {', '.join(missing)}")
        rating = LikertRating.from_dict({
            "item_id": body.item_id,
            "rater_id": body.rater_id,
            **body.scores,
        })
        item = state.store.append("rating", rating.to_dict())
        return {"id": item.id, **rating.to_dict()}

    @app.get(API_PREFIX + "/ratings/summary")
    def ratings_summary(kind: str | None = None, item_id: str | None = None) -> dict:
        ratings = []
        for item in state.store.all_items("rating"):
            payload = item.payload
            if item_id is not None and payload.get("item_id") != item_id:
                continue
            if kind is not None:
                try:
                    rated = state.store.get(payload["item_id"])
                except UnknownIdError:
                    continue
                if rated.kind != kind:
                    continue
            ratings.append(LikertRating.from_dict(payload))
        summary = likert_summary(ratings)
        return {"summary": summary.to_dict()}

    # ----------------------------------------------------------------- items

    @app.get(API_PREFIX + "/items/{item_id}")
    def get_item(item_id: str) -> dict:
        return state.store.get(item_id).to_dict()

    @app.get(API_PREFIX + "/items")
    def list_items(
        kind: str,
        cursor: str | None = None,
        page: str | None = None,
        limit: int = 50,
    ) -> dict:
        effective = cursor if cursor is not None else page
        items, next_cursor = state.store.list(kind, effective, limit)
        return {
            "items": [item.to_dict() for item in items],
            "next_cursor": next_cursor,
        }

    return app

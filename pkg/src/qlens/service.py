"""HTTP service over the store: composite analytics views for the frontend.

Payloads are emitted as canonical JSON bytes so a cached response, a
rebuilt response, and the CLI report of the same query are all
byte-identical.
"""

from __future__ import annotations

import json
import threading
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import HTMLResponse, JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from .analytics import (
    common_errors,
    comparison,
    comparison_to_dict,
    error_to_dict,
    group_filter,
    overview,
    overview_to_dict,
    recommend,
    recommendation_to_dict,
)
from .errors import (
    EmptyInput,
    InvalidQuery,
    ManifestError,
    NoSuchState,
    QLensError,
    StoreUnavailable,
    UnknownErrorRank,
    UnknownQuestion,
    UnknownStudent,
)
from .ingest import IngestDiagnostics, sessions_from_log
from .model import build_model, model_to_dict
from .serialize import canonical_json_bytes
from .store import Store

VIEWS_SCHEMA = "qlens-views/1"
QUESTIONS_SCHEMA = "qlens-questions/1"
RECOMMENDATION_SCHEMA = "qlens-recommendation/1"
INGEST_SCHEMA = "qlens-ingest/1"
DEFAULT_TOP_ERRORS = 10


@dataclass(frozen=True)
class GroupQuery:
    """A view filter; None leaves that dimension unrestricted."""

    grades: Optional[frozenset] = None
    scores: Optional[frozenset] = None
    student: Optional[str] = None
    min_count: int = 0

    def __post_init__(self):
        if self.min_count < 0:
            raise InvalidQuery(f"min_count must be >= 0, got {self.min_count}")

    def core(self) -> dict:
        """Canonical filter identity; min_count is view-only, not grouping."""
        return {
            "grades": sorted(self.grades) if self.grades is not None else None,
            "scores": sorted(self.scores) if self.scores is not None else None,
            "student": self.student,
        }


def parse_int_set(raw: Optional[str], name: str) -> Optional[frozenset]:
    """Comma-separated integers from a query string, None when absent."""
    if raw is None or raw == "":
        return None
    values = set()
    for part in raw.split(","):
        part = part.strip()
        try:
            values.add(int(part))
        except ValueError:
            raise InvalidQuery(f"{name} must be comma-separated integers, got {part!r}")
    return frozenset(values)


def filter_model_payload(model_dict: dict, min_count: int) -> dict:
    """Hide transitions under min_count and states left unconnected.

    The (0,0) anchor always stays. Mirrors the in-memory model filter so
    cached payloads and fresh builds agree.
    """
    if min_count <= 0:
        return model_dict
    kept = [t for t in model_dict["transitions"] if t["count"] >= min_count]
    incident = {(0, 0)}
    for t in kept:
        incident.add((t["step"] - 1, t["from_stage"]))
        incident.add((t["step"], t["to_stage"]))
    filtered = dict(model_dict)
    filtered["transitions"] = kept
    filtered["states"] = [s for s in model_dict["states"] if (s["step"], s["stage"]) in incident]
    return filtered


def _group_sessions(store: Store, question_id: str, query: GroupQuery):
    manifest = store.get_manifest(question_id)
    sessions = store.load_sessions(question_id)
    group = group_filter(
        sessions, manifest, grades=query.grades, scores=query.scores, student=query.student
    )
    return manifest, sessions, group


def views_payload(
    store: Store,
    question_id: str,
    query: GroupQuery,
    top_errors: int = DEFAULT_TOP_ERRORS,
) -> dict:
    """The composite payload behind GET views and the CLI report."""
    manifest, _, group = _group_sessions(store, question_id, query)
    core = query.core()
    cached = store.get_model_bytes(question_id, core)
    if cached is None:
        model_dict = model_to_dict(build_model(group, manifest, group=core))
        store.put_model_bytes(question_id, core, canonical_json_bytes(model_dict))
    else:
        model_dict = json.loads(cached.decode("utf-8"))
    return {
        "schema": VIEWS_SCHEMA,
        "question": question_id,
        "query": {**core, "min_count": query.min_count},
        "overview": overview_to_dict(overview(group, manifest)),
        "model": filter_model_payload(model_dict, query.min_count),
        "engagement": model_dict["engagement"],
        "comparison": comparison_to_dict(comparison(group, manifest)),
        "errors": [error_to_dict(e) for e in common_errors(group, manifest, top_errors)],
    }


def questions_payload(store: Store) -> dict:
    entries = []
    for question_id in store.question_ids():
        manifest = store.get_manifest(question_id)
        entries.append(
            {
                "question": question_id,
                "title": manifest.title,
                "students": store.student_count(question_id),
            }
        )
    return {"schema": QUESTIONS_SCHEMA, "questions": entries}


def recommendation_payload(store: Store, question_id: str, rank: int) -> dict:
    """Recommendation for the rank-th common error over the whole population."""
    manifest = store.get_manifest(question_id)
    if rank < 1:
        raise UnknownErrorRank(f"error rank must be >= 1, got {rank}")
    sessions = store.load_sessions(question_id)
    errors = common_errors(sessions, manifest, top_n=rank)
    if rank > len(errors):
        raise UnknownErrorRank(f"only {len(errors)} common errors, rank {rank} requested")
    model = build_model(sessions, manifest)
    result = recommend(errors[rank - 1].answer, model, manifest)
    return {
        "schema": RECOMMENDATION_SCHEMA,
        "question": question_id,
        "rank": rank,
        "fail_enders": errors[rank - 1].fail_enders,
        "recommendation": recommendation_to_dict(result),
    }


def ingest_payload(store: Store, question_id: str, body: bytes) -> dict:
    """Parse, sessionize, persist, and invalidate cached models."""
    manifest = store.get_manifest(question_id)
    diag = IngestDiagnostics()
    sessions = sessions_from_log(body, manifest, diag)
    added, replaced = store.add_sessions(question_id, sessions)
    store.invalidate_models(question_id)
    return {
        "schema": INGEST_SCHEMA,
        "question": question_id,
        "sessions_added": added,
        "sessions_replaced": replaced,
        **diag.to_dict(),
    }


_PLACEHOLDER = """<!doctype html>
<html><head><title>qlens</title></head>
<body><h1>qlens service</h1>
<p>No frontend bundle is installed. The API lives under <code>/api</code>:</p>
<ul>
<li>GET /api/questions</li>
<li>GET /api/questions/{id}/views</li>
<li>GET /api/questions/{id}/errors/{rank}/recommendation</li>
<li>POST /api/questions/{id}/ingest</li>
<li>GET /api/health</li>
</ul></body></html>
"""


def _canonical(payload: dict) -> Response:
    return Response(content=canonical_json_bytes(payload), media_type="application/json")


def create_app(store_root, frontend_dir=None) -> FastAPI:
    """Assemble the service over one store root."""
    store = Store(store_root)
    app = FastAPI(title="qlens", docs_url=None, redoc_url=None)
    ingest_locks: dict[str, threading.Lock] = defaultdict(threading.Lock)

    @app.exception_handler(QLensError)
    def _handle_domain_error(request: Request, exc: QLensError):
        if isinstance(exc, (UnknownQuestion, UnknownErrorRank, NoSuchState, UnknownStudent)):
            status = 404
        elif isinstance(exc, InvalidQuery):
            status = 422
        elif isinstance(exc, StoreUnavailable):
            status = 503
        elif isinstance(exc, (EmptyInput, ManifestError)):
            status = 400
        else:
            status = 500
        return JSONResponse(
            status_code=status, content={"error": type(exc).__name__, "detail": str(exc)}
        )

    @app.get("/api/health")
    def health():
        return _canonical({"schema": "qlens-health/1", "status": "ok"})

    @app.get("/api/questions")
    def list_questions():
        return _canonical(questions_payload(store))

    @app.get("/api/questions/{question_id}/views")
    def get_views(
        question_id: str,
        grades: Optional[str] = None,
        scores: Optional[str] = None,
        student: Optional[str] = None,
        min_count: int = 0,
    ):
        query = GroupQuery(
            grades=parse_int_set(grades, "grades"),
            scores=parse_int_set(scores, "scores"),
            student=student,
            min_count=min_count,
        )
        return _canonical(views_payload(store, question_id, query))

    @app.get("/api/questions/{question_id}/errors/{rank}/recommendation")
    def get_recommendation(question_id: str, rank: int):
        return _canonical(recommendation_payload(store, question_id, rank))

    @app.post("/api/questions/{question_id}/ingest")
    async def post_ingest(question_id: str, request: Request):
        body = await request.body()
        with ingest_locks[question_id]:
            return _canonical(ingest_payload(store, question_id, body))

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="frontend")
    else:

        @app.get("/", response_class=HTMLResponse)
        def index():
            return _PLACEHOLDER

    return app

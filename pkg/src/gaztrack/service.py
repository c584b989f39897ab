"""HTTP service for the review loop: queue, annotation, export, training.

Thin JSON facade over Store plus the rules/classifier modules. All
domain errors surface as one envelope, ``{code, message, detail}``, with
the HTTP status picked by error code, so clients can branch on ``code``
without parsing messages. A built review UI can be mounted as static
files under ``/`` via AppConfig.ui_dir.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from starlette.exceptions import HTTPException as StarletteHTTPException

from .config import AppConfig
from .dataset import FineClass, GroupClass, compute_stats, export_gat_text, group_of
from .errors import EmptyDataset, GaztrackError, MalformedRecord, MissingField
from .evaluation import nb_trainer, run_cv
from .features import build_vocab, tokenize, vectorize
from .ingest import documents_from_jsonl
from .naive_bayes import train_nb
from .rules import RuleSet, load_demo_rules, load_rules, match_spans, merge_spans
from .store import ReviewItem, ReviewStatus, Store
from .suggest import suggest_refinements

_STATUS_CODES = {
    "not_found": 404,
    "not_pending": 409,
    "duplicate_document": 409,
    "empty_dataset": 409,
    "insufficient_feedback": 409,
    "no_examples": 409,
    "empty_vocabulary": 409,
    "empty_field": 422,
    "missing_field": 422,
    "unknown_class": 422,
    "malformed_record": 422,
    "duplicate_id": 422,
    "bad_date": 422,
    "bad_k": 422,
    "rule_syntax": 422,
}


def _require_str(payload: dict, name: str) -> str:
    value = payload.get(name)
    if not isinstance(value, str) or not value.strip():
        raise MissingField(name)
    return value


async def _json_object(request: Request) -> dict:
    body = await request.body()
    if not body.strip():
        return {}
    try:
        payload = json.loads(body)
    except ValueError as exc:
        raise MalformedRecord(f"invalid JSON body: {exc}", source="request") from None
    if not isinstance(payload, dict):
        raise MalformedRecord("request body must be a JSON object", source="request")
    return payload


def create_app(
    config: AppConfig | None = None,
    *,
    store: Store | None = None,
    rules: RuleSet | None = None,
) -> FastAPI:
    """Build the application; store and rules are injectable for tests."""
    config = config or AppConfig()
    store = store if store is not None else Store(config.data_dir)
    if rules is None:
        rules = (
            load_rules(config.rules_path) if config.rules_path else load_demo_rules()
        )
    rules_by_name = {r.theme_name: r for r in rules.rules}

    app = FastAPI(title="gaztrack review service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store
    app.state.rules = rules
    app.state.config = config

    @app.exception_handler(GaztrackError)
    async def domain_error(request: Request, exc: GaztrackError) -> JSONResponse:
        return JSONResponse(
            status_code=_STATUS_CODES.get(exc.code, 500),
            content={"code": exc.code, "message": str(exc), "detail": exc.detail()},
        )

    @app.exception_handler(StarletteHTTPException)
    async def http_error(
        request: Request, exc: StarletteHTTPException
    ) -> JSONResponse:
        return JSONResponse(
            status_code=exc.status_code,
            content={"code": "http_error", "message": str(exc.detail), "detail": {}},
        )

    @app.exception_handler(Exception)
    async def unexpected_error(request: Request, exc: Exception) -> JSONResponse:
        return JSONResponse(
            status_code=500,
            content={"code": "internal", "message": str(exc), "detail": {}},
        )

    def item_payload(item: ReviewItem) -> dict:
        payload = item.to_dict()
        spans: list[tuple[int, int]] = []
        for theme in item.matched_themes:
            rule = rules_by_name.get(theme)
            if rule is not None:
                spans.extend(match_spans(rule, item.doc.body))
        payload["highlights"] = [list(span) for span in merge_spans(spans)]
        return payload

    @app.post("/api/documents", status_code=201)
    async def post_documents(request: Request) -> dict:
        raw = await request.body()
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError:
            raise MalformedRecord("body is not UTF-8", source="request") from None
        docs = documents_from_jsonl(text, source="request")
        items = store.enqueue(docs, rules)
        return {"received": len(docs), "enqueued": len(items)}

    @app.get("/api/queue")
    async def get_queue(status: str = "pending", limit: int | None = None) -> list:
        try:
            wanted = ReviewStatus(status)
        except ValueError:
            raise MalformedRecord(
                f"unknown status {status!r}", source="query"
            ) from None
        return [item_payload(item) for item in store.items(wanted, limit)]

    @app.get("/api/queue/{item_id}")
    async def get_item(item_id: str) -> dict:
        return item_payload(store.get_item(item_id))

    @app.post("/api/reviews/{item_id}")
    async def post_review(item_id: str, request: Request) -> dict:
        payload = await _json_object(request)
        record = store.submit_review(
            item_id,
            action=_require_str(payload, "action"),
            circumstance=_require_str(payload, "circumstance"),
            fine_class=_require_str(payload, "classification"),
        )
        return record.to_dict()

    @app.post("/api/reviews/{item_id}/discard")
    async def post_discard(item_id: str) -> dict:
        return item_payload(store.discard(item_id))

    @app.get("/api/export/gat.csv")
    async def export_csv() -> Response:
        return Response(
            content=export_gat_text(store.all_records()),
            media_type="text/csv; charset=utf-8",
            headers={"Content-Disposition": 'attachment; filename="gat.csv"'},
        )

    @app.post("/api/train")
    async def train() -> dict:
        records = store.all_records()
        if not records:
            raise EmptyDataset()
        tokenized = [tokenize(r.context) for r in records]
        vocab = build_vocab(tokenized, min_df=config.min_df)
        examples = [
            (vectorize(tokens, vocab), r.group_class)
            for tokens, r in zip(tokenized, records)
        ]
        model = train_nb(examples, config.alpha, vocab_size=vocab.size)
        store.set_model(model, vocab)
        return {
            "model": f"nb(alpha={config.alpha}, min_df={config.min_df})",
            "n_records": len(records),
            "vocab_size": vocab.size,
            "classes": [c.value for c in model.classes],
        }

    @app.post("/api/evaluate")
    async def evaluate(request: Request) -> dict:
        payload = await _json_object(request)
        try:
            k = int(payload.get("k", config.k))
            seed = int(payload.get("seed", config.seed))
        except (TypeError, ValueError):
            raise MalformedRecord(
                "k and seed must be integers", source="request"
            ) from None
        records = store.all_records()
        if not records:
            raise EmptyDataset()
        report = run_cv(
            records, nb_trainer(config.alpha, config.min_df), k=k, seed=seed
        )
        return report.to_json_dict()

    @app.get("/api/suggestions")
    async def get_suggestions(top_n: int = 5) -> list:
        return [s.to_dict() for s in suggest_refinements(store, top_n)]

    @app.get("/api/stats")
    async def get_stats() -> dict:
        return compute_stats(store.all_records()).to_dict()

    @app.get("/api/classes")
    async def get_classes() -> dict:
        return {
            "fine": [
                {"name": c.value, "group": group_of(c).value} for c in FineClass
            ],
            "groups": [g.value for g in GroupClass],
        }

    @app.get("/api/health")
    async def health() -> dict:
        items = store.items()
        by_status = {status.value: 0 for status in ReviewStatus}
        for item in items:
            by_status[item.status.value] += 1
        return {
            "status": "ok",
            "documents": store.document_count(),
            "queue": by_status,
            "records": len(store.all_records()),
            "themes": rules.theme_names(),
            "rules_version": rules.version,
            "model_loaded": store.model is not None,
        }

    if config.ui_dir and Path(config.ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app

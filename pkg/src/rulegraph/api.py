"""HTTP surface of the knowledge service.

Status contract on the query endpoint: 200 for an answer or an explicit
no-rule result, 422 when a parameter is still missing (the body names it),
400 for invalid queries, 404 for unknown statements. CRUD endpoints carry
statement documents verbatim; versions travel in ETag / If-Match headers so
the body stays the pure document schema.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import metrics
from .matching import Answer, InvalidQuery, MissingParameter, NoRule, Query, match
from .model import (
    DocumentError,
    Statement,
    build_statement,
    statement_to_doc,
    validate_definition,
)
from .store import NotFoundError, StatementStore, ValidationFailedError, VersionConflictError

API_PREFIX = "/api/v1"

MAX_SAFE_JSON_INT = 2**53 - 1


class UTF8JSONResponse(JSONResponse):
    media_type = "application/json; charset=utf-8"


def json_int(value: int) -> int | str:
    """Integers beyond JavaScript's exact range go out as decimal strings."""
    return value if abs(value) <= MAX_SAFE_JSON_INT else str(value)


def match_response(result: Answer | NoRule | MissingParameter | InvalidQuery) -> tuple[int, dict]:
    if isinstance(result, Answer):
        return result.http_status, {"response": result.label}
    if isinstance(result, MissingParameter):
        return result.http_status, {"response": result.parameter}
    if isinstance(result, InvalidQuery):
        return result.http_status, {"response": False, "error": result.reason.value}
    return result.http_status, {"response": False}


def metrics_body(stmt: Statement) -> dict:
    m = metrics.statement_metrics(stmt)
    return {
        "sigma": list(m.sigma),
        "z": json_int(m.z),
        "t": json_int(m.t),
        "coverage_ratio": str(m.coverage_ratio),
    }


def _etag(version: int) -> str:
    return f'"{version}"'


def _parse_if_match(raw: str) -> int:
    value = raw.strip().removeprefix("W/").strip().strip('"')
    return int(value)


def create_app(store: StatementStore, cors_origin: str = "*") -> FastAPI:
    app = FastAPI(title="rulegraph knowledge service", default_response_class=UTF8JSONResponse)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[cors_origin],
        allow_methods=["*"],
        allow_headers=["*"],
        expose_headers=["ETag"],
    )

    def not_found() -> UTF8JSONResponse:
        return UTF8JSONResponse({"error": "NOT_FOUND"}, status_code=404)

    async def read_json_object(request: Request) -> dict:
        try:
            body = json.loads(await request.body())
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise DocumentError(f"body is not valid JSON: {exc}") from exc
        if not isinstance(body, dict):
            raise DocumentError("body must be a JSON object")
        return body

    @app.exception_handler(DocumentError)
    async def bad_document(request: Request, exc: DocumentError) -> UTF8JSONResponse:
        return UTF8JSONResponse({"error": "BAD_DOCUMENT", "detail": str(exc)}, status_code=400)

    @app.get(API_PREFIX + "/statements")
    async def list_statements() -> UTF8JSONResponse:
        rows = [
            {
                "id": s.id,
                "name": s.name,
                "parameter_count": s.parameter_count,
                "z": json_int(s.z),
                "t": json_int(s.t),
            }
            for s in store.list()
        ]
        return UTF8JSONResponse({"statements": rows})

    @app.post(API_PREFIX + "/statements")
    async def create_statement(request: Request) -> UTF8JSONResponse:
        doc = await read_json_object(request)
        built = build_statement(doc)
        if not isinstance(built, Statement):
            return UTF8JSONResponse(
                {"error": "VALIDATION_FAILED", **built.to_doc()}, status_code=422
            )
        if store.exists(built.id):
            return UTF8JSONResponse(
                {"error": "ALREADY_EXISTS", "id": built.id}, status_code=409
            )
        record = store.save(built)
        return UTF8JSONResponse(
            statement_to_doc(record.statement),
            status_code=201,
            headers={"ETag": _etag(record.version)},
        )

    @app.post(API_PREFIX + "/statements/validate")
    async def validate_statement_body(request: Request) -> Response:
        doc = await read_json_object(request)
        report = validate_definition(doc)
        return UTF8JSONResponse(report.to_doc())

    @app.get(API_PREFIX + "/statements/{statement_id}")
    async def get_statement(statement_id: str) -> Response:
        try:
            record = store.load(statement_id)
        except NotFoundError:
            return not_found()
        return UTF8JSONResponse(
            statement_to_doc(record.statement),
            headers={"ETag": _etag(record.version)},
        )

    @app.put(API_PREFIX + "/statements/{statement_id}")
    async def put_statement(statement_id: str, request: Request) -> Response:
        doc = await read_json_object(request)
        if not store.exists(statement_id):
            return not_found()
        if doc.get("id") != statement_id:
            return UTF8JSONResponse(
                {"error": "BAD_DOCUMENT", "detail": "document id must match the URL"},
                status_code=400,
            )
        expected: int | None = None
        if "if-match" in request.headers:
            try:
                expected = _parse_if_match(request.headers["if-match"])
            except ValueError:
                return UTF8JSONResponse(
                    {"error": "BAD_IF_MATCH", "detail": "If-Match must carry a version integer"},
                    status_code=400,
                )
        built = build_statement(doc)
        if not isinstance(built, Statement):
            return UTF8JSONResponse(
                {"error": "VALIDATION_FAILED", **built.to_doc()}, status_code=422
            )
        try:
            record = store.save(built, expected_version=expected)
        except VersionConflictError as exc:
            return UTF8JSONResponse(
                {"error": "VERSION_CONFLICT", "current_version": exc.actual},
                status_code=409,
            )
        except ValidationFailedError as exc:
            return UTF8JSONResponse(
                {"error": "VALIDATION_FAILED", **exc.report.to_doc()}, status_code=422
            )
        return UTF8JSONResponse(
            statement_to_doc(record.statement),
            headers={"ETag": _etag(record.version)},
        )

    @app.delete(API_PREFIX + "/statements/{statement_id}")
    async def delete_statement(statement_id: str) -> Response:
        try:
            store.delete(statement_id)
        except NotFoundError:
            return not_found()
        return Response(status_code=204)

    @app.get(API_PREFIX + "/statements/{statement_id}/query")
    async def query_statement(statement_id: str, request: Request) -> Response:
        try:
            record = store.load(statement_id)
        except NotFoundError:
            return UTF8JSONResponse(
                {"response": False, "error": "NOT_FOUND"}, status_code=404
            )
        # multi_items preserves duplicates and their order, which the
        # multi-value check depends on.
        query = Query.from_items(request.query_params.multi_items())
        status, body = match_response(match(record.statement, query))
        return UTF8JSONResponse(body, status_code=status)

    @app.get(API_PREFIX + "/statements/{statement_id}/metrics")
    async def statement_metrics_endpoint(statement_id: str) -> Response:
        try:
            record = store.load(statement_id)
        except NotFoundError:
            return not_found()
        return UTF8JSONResponse(metrics_body(record.statement))

    return app

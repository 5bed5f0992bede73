"""HTTP facade over interview sessions.

The service scans a config directory at startup, restores persisted
sessions from the store, and serializes mutations per session. Every
response is derived from (config, answers) alone, so a restart changes
nothing a client can observe.
"""

from __future__ import annotations

import logging
import threading
import uuid
from pathlib import Path
from typing import Any, Literal

from fastapi import FastAPI, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from .errors import AnswerValidationError, LexdraftError, SessionStateError
from .graph import export_dot, export_json
from .session import (
    ConfigBundle,
    Session,
    load_config_bundle,
    new_session,
    revise_answer,
    session_view,
    submit_answer,
)
from .store import SessionStore

logger = logging.getLogger("lexdraft.service")


class CreateSessionBody(BaseModel):
    config_id: str


class AnswerBody(BaseModel):
    value: Any = None


def _load_bundles(configs_dir: Path) -> dict[str, ConfigBundle]:
    bundles: dict[str, ConfigBundle] = {}
    for path in sorted(configs_dir.glob("*.xml")):
        try:
            bundles[path.stem] = load_config_bundle(path)
        except LexdraftError as exc:
            logger.warning("skipping %s: %s", path.name, exc)
    return bundles


def create_app(configs_dir: str | Path, store_dir: str | Path) -> FastAPI:
    bundles = _load_bundles(Path(configs_dir))
    store = SessionStore(store_dir)

    sessions: dict[str, Session] = {}
    locks: dict[str, threading.Lock] = {}
    registry_lock = threading.Lock()

    quarantined: list[str] = []
    unrestored: list[str] = []
    records, corrupt = store.load_all()
    quarantined.extend(corrupt)
    for record in records:
        bundle = bundles.get(record.config_id)
        if bundle is None:
            logger.warning(
                "session %s references unknown config %s; leaving it alone",
                record.session_id,
                record.config_id,
            )
            unrestored.append(record.session_id)
            continue
        try:
            sessions[record.session_id] = new_session(
                bundle.config,
                record.config_id,
                bundle.theory,
                bundle.template,
                session_id=record.session_id,
                answers=record.answers,
            )
            locks[record.session_id] = threading.Lock()
        except LexdraftError as exc:
            logger.warning("cannot replay session %s: %s", record.session_id, exc)
            try:
                store.quarantine(record.session_id)
                quarantined.append(record.session_id)
            except LexdraftError:
                unrestored.append(record.session_id)

    app = FastAPI(title="lexdraft", docs_url=None, redoc_url=None)
    # Single-tenant deployment with unguessable session ids; the web client
    # may be served from anywhere.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def not_found(what: str) -> JSONResponse:
        return JSONResponse({"message": f"unknown {what}"}, status_code=404)

    @app.exception_handler(Exception)
    async def internal_error(request: Request, exc: Exception) -> JSONResponse:
        error_id = uuid.uuid4().hex
        logger.exception("request %s failed [%s]", request.url.path, error_id)
        return JSONResponse({"error_id": error_id}, status_code=500)

    @app.get("/configs")
    def list_configs() -> list[dict]:
        return [
            {
                "id": config_id,
                "title": bundle.config.title,
                "goal": bundle.config.goal,
            }
            for config_id, bundle in sorted(bundles.items())
        ]

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody) -> Any:
        bundle = bundles.get(body.config_id)
        if bundle is None:
            return not_found("config")
        session = new_session(
            bundle.config, body.config_id, bundle.theory, bundle.template
        )
        with registry_lock:
            sessions[session.id] = session
            locks[session.id] = threading.Lock()
        store.save(session.id, session.config_id, dict(session.answers))
        return session_view(session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> Any:
        session = sessions.get(session_id)
        if session is None:
            return not_found("session")
        return session_view(session)

    def _mutate(session_id: str, apply, step_of) -> Any:
        lock = locks.get(session_id)
        if lock is None:
            return not_found("session")
        with lock:
            session = sessions.get(session_id)
            if session is None:
                return not_found("session")
            try:
                changed = apply(session)
            except AnswerValidationError as exc:
                return JSONResponse(
                    {
                        "expected": exc.expected_kind,
                        "step": step_of(session),
                        "message": str(exc),
                    },
                    status_code=422,
                )
            except SessionStateError as exc:
                return JSONResponse({"message": str(exc)}, status_code=409)
            sessions[session_id] = changed
            store.save(changed.id, changed.config_id, dict(changed.answers))
            return session_view(changed)

    @app.post("/sessions/{session_id}/answers")
    def post_answer(session_id: str, body: AnswerBody) -> Any:
        return _mutate(
            session_id,
            lambda s: submit_answer(s, body.value),
            lambda s: s.current_step.order if s.current_step else None,
        )

    @app.put("/sessions/{session_id}/answers/{step}")
    def put_answer(session_id: str, step: int, body: AnswerBody) -> Any:
        return _mutate(
            session_id,
            lambda s: revise_answer(s, step, body.value),
            lambda s: step,
        )

    @app.get("/sessions/{session_id}/document")
    def get_document(session_id: str) -> Any:
        session = sessions.get(session_id)
        if session is None:
            return not_found("session")
        return Response(
            content=session.snapshot.document.data, media_type="application/xml"
        )

    @app.get("/sessions/{session_id}/graph")
    def get_graph(
        session_id: str, format: Literal["json", "dot"] = Query("json")
    ) -> Any:
        session = sessions.get(session_id)
        if session is None:
            return not_found("session")
        if format == "dot":
            return PlainTextResponse(
                export_dot(session.snapshot.graph), media_type="text/vnd.graphviz"
            )
        return Response(
            content=export_json(session.snapshot.graph),
            media_type="application/json",
        )

    @app.get("/sessions/{session_id}/explanation")
    def get_explanation(session_id: str) -> Any:
        session = sessions.get(session_id)
        if session is None:
            return not_found("session")
        step = session.current_step
        if step is None:
            return {"step": None, "explanation": None}
        return {"step": step.order, "explanation": step.explanation}

    @app.get("/health")
    def health() -> dict:
        return {
            "status": "ok",
            "configs": sorted(bundles),
            "sessions": len(sessions),
            "quarantined": sorted(quarantined),
            "unrestored": sorted(unrestored),
        }

    return app

"""HTTP chat service: JSON API over the engine for the browser client."""

from __future__ import annotations

import errno
import logging
import socket
from typing import Any, Optional

import uvicorn
from fastapi import Depends, FastAPI, Header, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .config import EngineConfig
from .engine import Engine, InvalidQuery
from .errors import AgentError
from .session import EngineBusy, UnknownSession

logger = logging.getLogger(__name__)


class BindFailure(AgentError):
    pass


class MetadataRef(BaseModel):
    reference: str
    kind: str = "file"
    caption: str = ""


class CreateSessionRequest(BaseModel):
    language: Optional[str] = None


class RespondRequest(BaseModel):
    session_id: Optional[str] = None
    query: str
    metadata: list[MetadataRef] = Field(default_factory=list)
    language: Optional[str] = None


class MetadataUploadRequest(BaseModel):
    filename: str
    content_b64: str
    kind: str = "file"  # modality: image | audio | text | file
    caption: str = ""


def build_app(engine: Engine) -> FastAPI:
    app = FastAPI(title="careagent", version="0.1.0")
    # the browser client is served from a separate origin at desk scale
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def check_token(x_api_token: Optional[str] = Header(default=None)) -> None:
        expected = engine.config.api_token
        if expected and x_api_token != expected:
            raise HTTPException(status_code=401, detail="invalid or missing X-API-Token")

    guarded = [Depends(check_token)]

    @app.get("/healthz")
    def healthz() -> dict[str, str]:
        return {"status": "ok"}

    @app.get("/api/config")
    def config_summary() -> dict[str, Any]:
        return {
            "languages": list(engine.config.languages),
            "strategy": engine.config.strategy,
            "lang_mode": engine.config.lang_mode,
            "max_iterations": engine.config.max_iterations,
        }

    @app.post("/api/sessions", dependencies=guarded)
    def create_session(body: CreateSessionRequest | None = None) -> dict[str, str]:
        language = body.language if body else None
        session = engine.create_session(language=language)
        return {"session_id": session.session_id}

    @app.post("/api/respond", dependencies=guarded)
    def respond(body: RespondRequest) -> dict[str, Any]:
        try:
            return engine.respond(
                session_id=body.session_id,
                query=body.query,
                metadata_refs=[m.model_dump() for m in body.metadata],
                language=body.language,
            )
        except InvalidQuery as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        except UnknownSession as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except EngineBusy as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc

    @app.get("/api/sessions/{session_id}/history", dependencies=guarded)
    def history(session_id: str) -> dict[str, Any]:
        try:
            return {"session_id": session_id, "turns": engine.history(session_id)}
        except UnknownSession as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc

    @app.get("/api/sessions/{session_id}/trace/{turn_id}", dependencies=guarded)
    def trace(session_id: str, turn_id: int) -> dict[str, Any]:
        try:
            return engine.trace(session_id, turn_id)
        except UnknownSession as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc

    @app.post("/api/metadata", dependencies=guarded)
    def upload_metadata(body: MetadataUploadRequest) -> dict[str, str]:
        try:
            reference = engine.upload_metadata(
                filename=body.filename,
                content_b64=body.content_b64,
                kind=body.kind,
                caption=body.caption,
            )
        except InvalidQuery as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {"reference": reference}

    @app.get("/api/tasks", dependencies=guarded)
    def tasks() -> dict[str, Any]:
        return {"tasks": engine.task_summaries()}

    return app


def serve(config: EngineConfig) -> None:
    """Run the service until interrupted; raises BindFailure when the port is taken."""
    engine = Engine(config)
    app = build_app(engine)
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((config.host, config.port))
    except OSError as exc:
        if exc.errno in (errno.EADDRINUSE, errno.EACCES):
            raise BindFailure(f"cannot bind {config.host}:{config.port}: {exc}") from exc
        raise
    finally:
        probe.close()
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")

"""Session-oriented HTTP API for live practice conversations."""

from __future__ import annotations

import threading
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from talkcoach import __version__
from talkcoach.config import AppConfig
from talkcoach.nlu import Interpreter, RuleBasedInterpreter
from talkcoach.service.session import ConversationSession, SessionEndedError
from talkcoach.speech import StubTranscriber, Synthesizer, Transcriber
from talkcoach.store import UserRegistry


class CreateSessionRequest(BaseModel):
    name_hint: Optional[str] = None


class CreateSessionResponse(BaseModel):
    session_id: str
    bot_text: str
    state: str


class TurnRequest(BaseModel):
    text: Optional[str] = None
    audio_ref: Optional[str] = None
    duration_ms: Optional[int] = None


class TurnResponse(BaseModel):
    bot_text: str
    state: str
    done: bool
    bot_audio_ref: Optional[str] = None


class SessionHub:
    def __init__(self):
        self._sessions: dict[str, ConversationSession] = {}
        self._lock = threading.Lock()

    def add(self, session: ConversationSession) -> None:
        with self._lock:
            self._sessions[session.id] = session

    def get(self, session_id: str) -> ConversationSession | None:
        with self._lock:
            return self._sessions.get(session_id)


def create_app(
    config: AppConfig | None = None,
    interpreter: Interpreter | None = None,
    transcriber: Transcriber | None = None,
    synthesizer: Synthesizer | None = None,
) -> FastAPI:
    cfg = config or AppConfig()
    registry = UserRegistry(cfg.store_path)
    hub = SessionHub()
    nlu = interpreter or RuleBasedInterpreter()
    asr = transcriber or StubTranscriber()
    tts = synthesizer

    app = FastAPI(title="talkcoach", version=__version__)
    app.state.config = cfg
    app.state.registry = registry
    app.state.hub = hub

    app.add_middleware(
        CORSMiddleware,
        allow_origins=cfg.cors_origins,
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/sessions", response_model=CreateSessionResponse)
    def create_session(body: CreateSessionRequest):
        session = ConversationSession(
            config=cfg,
            interpreter=nlu,
            registry=registry,
            transcriber=asr,
            synthesizer=tts,
            name_hint=body.name_hint,
        )
        hub.add(session)
        return CreateSessionResponse(
            session_id=session.id, bot_text=session.greeting, state=session.state
        )

    @app.post("/sessions/{session_id}/turn", response_model=TurnResponse)
    def post_turn(session_id: str, body: TurnRequest):
        session = hub.get(session_id)
        if session is None:
            return JSONResponse(status_code=404, content={"detail": "unknown session"})
        if (body.text is None) == (body.audio_ref is None):
            return JSONResponse(
                status_code=400,
                content={"detail": "exactly one of text or audio_ref must be provided"},
            )
        if session.done:
            return JSONResponse(status_code=409, content={"detail": "session has ended"})
        if not session.try_acquire():
            return JSONResponse(status_code=409, content={"detail": "turn already in flight"})
        try:
            outcome = session.turn(
                text=body.text, audio_ref=body.audio_ref, duration_ms=body.duration_ms
            )
        except SessionEndedError:
            return JSONResponse(status_code=409, content={"detail": "session has ended"})
        finally:
            session.release()
        return TurnResponse(
            bot_text=outcome.bot_text,
            state=outcome.state,
            done=outcome.done,
            bot_audio_ref=outcome.bot_audio_ref,
        )

    @app.get("/sessions/{session_id}/report")
    def get_report(session_id: str):
        session = hub.get(session_id)
        if session is None:
            return JSONResponse(status_code=404, content={"detail": "unknown session"})
        if session.report is None:
            return JSONResponse(
                status_code=409,
                content={"detail": "feedback not reached yet; keep talking"},
            )
        return JSONResponse(content=session.report.to_dict())

    @app.get("/sessions/{session_id}/trace")
    def get_trace(session_id: str):
        session = hub.get(session_id)
        if session is None:
            return JSONResponse(status_code=404, content={"detail": "unknown session"})
        return {"session_id": session.id, "states": session.state_trace}

    return app

"""HTTP/JSON session service with per-session disk persistence.

Records store the creation request plus the answer history; loading replays
the history through the session core, so stored state can never drift from
what the engine computes. Writes are atomic (temp file + rename) and each
session mutates under its own lock.
"""

from __future__ import annotations

import datetime
import json
import os
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .diagnosis import InfeasibleProblem
from .formulas import ParseError
from .kb import KbFormatError, parse_kb
from .selection import FaultModel, Strategy, StrategyKind
from .session import DebugSession, SessionStatus, start_session, submit_answer


class CreateSessionRequest(BaseModel):
    kb_text: str
    strategy: str = "entropy"
    seed: Optional[int] = None
    fault_model: Optional[dict] = None
    sigma: float = Field(default=0.95, gt=0.0, le=1.0)
    n_leading: int = Field(default=9, ge=2)


@dataclass
class SessionRecord:
    id: str
    created_at: str
    kb_text: str
    strategy: Strategy
    fault_model: FaultModel
    sigma: float
    n_leading: int
    session: DebugSession
    lock: threading.Lock = field(default_factory=threading.Lock)


def _state_view(record: SessionRecord) -> dict:
    session = record.session
    diagnoses = [
        {"axiom_ids": list(d.sorted_ids), "probability": p}
        for d, p in session.ranked()
    ]
    current = None
    if session.current_query is not None:
        current = {"sentences": list(session.current_query.sentence_texts)}
    return {
        "id": record.id,
        "created_at": record.created_at,
        "status": session.status.value,
        "sigma": record.sigma,
        "n_leading": record.n_leading,
        "strategy": record.strategy.to_json_dict(),
        "diagnoses": diagnoses,
        "current_query": current,
        "history": [
            {"sentences": list(item.query.sentence_texts), "answer": item.answer}
            for item in session.history
        ],
        "kb_text": record.kb_text,
    }


def _record_document(record: SessionRecord) -> dict:
    return {
        "id": record.id,
        "created_at": record.created_at,
        "kb_text": record.kb_text,
        "strategy": record.strategy.to_json_dict(),
        "fault_model": record.fault_model.to_json_dict(),
        "sigma": record.sigma,
        "n_leading": record.n_leading,
        "history": [
            {"sentences": list(item.query.sentence_texts), "answer": item.answer}
            for item in record.session.history
        ],
        "snapshot": _state_view(record),
    }


class SessionStore:
    """In-memory session map backed by one JSON document per session."""

    def __init__(self, data_dir: Optional[Path] = None):
        self.data_dir = Path(data_dir) if data_dir else None
        self.records: dict[str, SessionRecord] = {}
        self.corrupt: set[str] = set()
        self._map_lock = threading.Lock()
        if self.data_dir is not None:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            self._load_all()

    def _load_all(self) -> None:
        for path in sorted(self.data_dir.glob("*.json")):
            try:
                self.records[path.stem] = self._restore(json.loads(path.read_text()))
            except Exception:
                self.corrupt.add(path.stem)

    def _restore(self, doc: dict) -> SessionRecord:
        strategy = Strategy.from_json_dict(doc["strategy"])
        fault_model = FaultModel.from_json_dict(doc["fault_model"])
        kb = parse_kb(doc["kb_text"])
        session = start_session(kb, strategy, fault_model,
                                doc["sigma"], doc["n_leading"])
        for item in doc["history"]:
            if session.status is not SessionStatus.AWAITING_ANSWER:
                raise ValueError("history continues past a terminal state")
            expected = set(item["sentences"])
            got = set(session.current_query.sentence_texts)
            if expected != got:
                raise ValueError(f"replayed query {got} does not match stored {expected}")
            submit_answer(session, item["answer"])
        return SessionRecord(
            id=doc["id"], created_at=doc["created_at"], kb_text=doc["kb_text"],
            strategy=strategy, fault_model=fault_model, sigma=doc["sigma"],
            n_leading=doc["n_leading"], session=session)

    def add(self, record: SessionRecord) -> None:
        with self._map_lock:
            self.records[record.id] = record
        self.save(record)

    def get(self, session_id: str) -> SessionRecord:
        record = self.records.get(session_id)
        if record is None:
            if session_id in self.corrupt:
                raise HTTPException(status_code=500,
                                    detail="session record on disk is unreadable")
            raise HTTPException(status_code=404, detail="unknown session id")
        return record

    def save(self, record: SessionRecord) -> None:
        if self.data_dir is None:
            return
        path = self.data_dir / f"{record.id}.json"
        tmp = path.with_suffix(".json.tmp")
        try:
            tmp.write_text(json.dumps(_record_document(record), indent=1))
            os.replace(tmp, path)
        except OSError as exc:
            if tmp.exists():
                tmp.unlink(missing_ok=True)
            raise HTTPException(status_code=500, detail=f"persistence failure: {exc}")

    def delete(self, session_id: str) -> None:
        with self._map_lock:
            self.records.pop(session_id, None)
            self.corrupt.discard(session_id)
        if self.data_dir is not None:
            (self.data_dir / f"{session_id}.json").unlink(missing_ok=True)


def create_app(data_dir: Optional[Path | str] = None,
               ui_dir: Optional[Path | str] = None) -> FastAPI:
    app = FastAPI(title="kbdbg session service")
    store = SessionStore(Path(data_dir) if data_dir else None)
    app.state.store = store

    @app.post("/api/sessions", status_code=201)
    def create_session(request: CreateSessionRequest):
        try:
            kind = StrategyKind(request.strategy)
        except ValueError:
            raise HTTPException(status_code=422,
                                detail=f"unknown strategy {request.strategy!r}")
        try:
            if kind is StrategyKind.RANDOM:
                strategy = Strategy(kind, request.seed if request.seed is not None else 0)
            else:
                strategy = Strategy(kind, request.seed)
            fault_model = (FaultModel.from_json_dict(request.fault_model)
                           if request.fault_model else FaultModel())
        except (ValueError, TypeError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        try:
            kb = parse_kb(request.kb_text)
        except ParseError as exc:
            raise HTTPException(status_code=400, detail={
                "message": exc.bare_message, "line": exc.line, "column": exc.column})
        except KbFormatError as exc:
            raise HTTPException(status_code=400, detail={
                "message": str(exc), "line": exc.line})
        try:
            session = start_session(kb, strategy, fault_model,
                                    request.sigma, request.n_leading)
        except InfeasibleProblem as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        record = SessionRecord(
            id=uuid.uuid4().hex,
            created_at=datetime.datetime.now(datetime.timezone.utc).isoformat(),
            kb_text=request.kb_text, strategy=strategy, fault_model=fault_model,
            sigma=request.sigma, n_leading=request.n_leading, session=session)
        store.add(record)
        return _state_view(record)

    @app.get("/api/sessions")
    def list_sessions():
        entries = [
            {"id": r.id, "created_at": r.created_at, "status": r.session.status.value}
            for r in store.records.values()
        ]
        entries.sort(key=lambda e: (e["created_at"], e["id"]))
        return {"sessions": entries}

    @app.get("/api/sessions/{session_id}")
    def get_state(session_id: str):
        return _state_view(store.get(session_id))

    @app.post("/api/sessions/{session_id}/answer")
    async def post_answer(session_id: str, request: Request):
        record = store.get(session_id)
        try:
            payload = await request.json()
        except Exception:
            raise HTTPException(status_code=400, detail="body must be JSON")
        if not isinstance(payload, dict) or payload.get("answer") not in ("yes", "no"):
            raise HTTPException(status_code=400,
                                detail="payload must be {\"answer\": \"yes\"|\"no\"}")
        with record.lock:
            if record.session.status is not SessionStatus.AWAITING_ANSWER:
                raise HTTPException(status_code=409,
                                    detail=f"session is {record.session.status.value}")
            submit_answer(record.session, payload["answer"])
            store.save(record)
        return _state_view(record)

    @app.delete("/api/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        store.get(session_id)
        store.delete(session_id)

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    else:
        @app.get("/")
        def index():
            return JSONResponse({"service": "kbdbg", "api": "/api/sessions"})

    return app

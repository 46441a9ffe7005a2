"""HTTP/JSON facade over the engine.

One active knowledge-base snapshot, replaced atomically by POST /kb;
reads capture the current snapshot once per request, so concurrent
readers never observe a half-loaded graph.  What-if sessions layer
hypothetical triples over the snapshot they were opened against and
never touch it.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from datetime import date
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .analysis import (
    WhatIfState,
    missing_competences,
    profile_competences,
    recommend_trainings,
    require_profile,
    simulate_enrollment,
)
from .errors import DateParseError, KbError, NoKnowledgeBaseError, UnknownSessionError
from .inference import saturate
from .model import Graph, Iri, PrefixMap
from .namespaces import CMO
from .schema import CMO_VOCABULARY, DEFAULT_LEVEL_SCALE, LevelScale, PROFIL_APPRENANT
from .sparql import evaluate, parse_query
from .turtle import parse

DEFAULT_SESSION_TIMEOUT = 3600.0


@dataclass
class Snapshot:
    graph: Graph
    warnings: tuple[str, ...] = ()


class SnapshotStore:
    """Holder for the active snapshot; swap is atomic, readers keep the
    reference they grabbed."""

    def __init__(self, initial: Optional[Graph] = None):
        self._lock = threading.Lock()
        self._snapshot: Optional[Snapshot] = Snapshot(initial) if initial is not None else None

    @property
    def current(self) -> Optional[Snapshot]:
        return self._snapshot

    def require(self) -> Snapshot:
        snapshot = self._snapshot
        if snapshot is None:
            raise NoKnowledgeBaseError("no knowledge base loaded; POST /kb first")
        return snapshot

    def replace(self, snapshot: Snapshot) -> None:
        with self._lock:
            self._snapshot = snapshot


@dataclass
class SessionEntry:
    state: WhatIfState
    last_access: float = field(default_factory=time.monotonic)


class SessionStore:
    """What-if sessions, isolated from each other and from the active
    snapshot; idle sessions expire after the configured timeout."""

    def __init__(self, timeout: float = DEFAULT_SESSION_TIMEOUT):
        self._lock = threading.Lock()
        self._sessions: dict[str, SessionEntry] = {}
        self.timeout = timeout

    def _evict(self, now: float) -> None:
        stale = [sid for sid, e in self._sessions.items() if now - e.last_access > self.timeout]
        for sid in stale:
            del self._sessions[sid]

    def get_or_create(self, session_id: str, base: Graph) -> WhatIfState:
        now = time.monotonic()
        with self._lock:
            self._evict(now)
            entry = self._sessions.get(session_id)
            if entry is None:
                entry = SessionEntry(WhatIfState(base))
                self._sessions[session_id] = entry
            entry.last_access = now
            return entry.state

    def get(self, session_id: str) -> Optional[WhatIfState]:
        now = time.monotonic()
        with self._lock:
            self._evict(now)
            entry = self._sessions.get(session_id)
            if entry is None:
                return None
            entry.last_access = now
            return entry.state

    def put(self, session_id: str, state: WhatIfState) -> None:
        with self._lock:
            self._sessions[session_id] = SessionEntry(state)

    def drop(self, session_id: str) -> bool:
        with self._lock:
            return self._sessions.pop(session_id, None) is not None


class EnrollRequest(BaseModel):
    profile: str
    training: str


class QueryRequest(BaseModel):
    query: str


def _resolve_iri(value: str) -> Iri:
    """Accept a full IRI, a qname under the default prefixes, or a bare
    local name in the cmo namespace."""
    if value.startswith("http://") or value.startswith("https://"):
        return Iri(value)
    if ":" in value:
        return PrefixMap.default().expand(value)
    return Iri(CMO + value)


def create_app(
    initial_graph: Optional[Graph] = None,
    cors_origin: Optional[str] = None,
    session_timeout: float = DEFAULT_SESSION_TIMEOUT,
    scale: LevelScale = DEFAULT_LEVEL_SCALE,
) -> FastAPI:
    app = FastAPI(title="cmokb", version="0.1.0",
                  description="Competence knowledge-base service")
    store = SnapshotStore(initial_graph)
    sessions = SessionStore(session_timeout)
    app.state.snapshots = store
    app.state.sessions = sessions

    if cors_origin:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=[cors_origin] if cors_origin != "*" else ["*"],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(KbError)
    async def _kb_error(request: Request, exc: KbError):
        body = {"error": {"code": exc.code, "message": str(exc)}}
        if exc.detail is not None:
            body["error"]["detail"] = exc.detail
        return JSONResponse(status_code=exc.http_status, content=body)

    def _graph_for(session: Optional[str], saturated: bool = False,
                   reference_date: Optional[str] = None) -> Graph:
        snapshot = store.require()
        if session is None:
            graph = snapshot.graph
        else:
            graph = sessions.get_or_create(session, snapshot.graph).effective()
        if saturated:
            if reference_date is not None:
                try:
                    at = date.fromisoformat(reference_date)
                except ValueError as exc:
                    raise DateParseError(f"cannot parse date: {reference_date!r}") from exc
            else:
                at = date.today()  # captured once per request
            graph = saturate(graph, reference_date=at).graph
        return graph

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/kb")
    async def upload_kb(request: Request):
        text = (await request.body()).decode("utf-8")
        result = parse(text)
        store.replace(Snapshot(result.graph, tuple(result.warnings)))
        return {"triples": len(result.graph), "warnings": list(result.warnings)}

    @app.post("/query")
    def run_query(body: QueryRequest):
        snapshot = store.require()
        table = evaluate(snapshot.graph, parse_query(body.query))
        return table.to_json()

    # ':path' so callers may put a full IRI (with slashes) in the segment
    @app.get("/profiles/{profile_id:path}/competences")
    def profile_rows(profile_id: str, session: Optional[str] = None,
                     saturated: bool = False, referenceDate: Optional[str] = None):
        graph = _graph_for(session, saturated, referenceDate)
        target = _resolve_iri(profile_id)
        require_profile(graph, target)
        table = profile_competences(graph, target)
        return table.to_json()

    @app.get("/profiles")
    def list_profiles():
        snapshot = store.require()
        subjects = snapshot.graph.subjects(CMO_VOCABULARY.type_predicate, PROFIL_APPRENANT)
        return {"profiles": [s.value for s in subjects if isinstance(s, Iri)]}

    @app.get("/occupations")
    def list_occupations():
        from .schema import METIER
        snapshot = store.require()
        subjects = snapshot.graph.subjects(CMO_VOCABULARY.type_predicate, METIER)
        return {"occupations": [s.value for s in subjects if isinstance(s, Iri)]}

    @app.get("/gap")
    def gap(profile: str, occupation: str, levelAware: bool = False,
            session: Optional[str] = None,
            saturated: bool = False, referenceDate: Optional[str] = None):
        graph = _graph_for(session, saturated, referenceDate)
        target = _resolve_iri(profile)
        require_profile(graph, target)
        report = missing_competences(
            graph, target, _resolve_iri(occupation),
            level_aware=levelAware, scale=scale,
        )
        return report.to_json()

    @app.get("/recommendations")
    def recommendations(profile: str, occupation: str, session: Optional[str] = None,
                        saturated: bool = False, referenceDate: Optional[str] = None):
        graph = _graph_for(session, saturated, referenceDate)
        target = _resolve_iri(profile)
        require_profile(graph, target)
        report = missing_competences(graph, target, _resolve_iri(occupation), scale=scale)
        plans = recommend_trainings(graph, report)
        return {"plans": [p.to_json() for p in plans]}

    @app.post("/whatif/{session_id}/enroll")
    def enroll(session_id: str, body: EnrollRequest):
        snapshot = store.require()
        state = sessions.get_or_create(session_id, snapshot.graph)
        learner = _resolve_iri(body.profile)
        require_profile(state.effective(), learner)
        new_state = simulate_enrollment(state, learner, _resolve_iri(body.training))
        sessions.put(session_id, new_state)
        return {
            "session": session_id,
            "actions": [{"profile": p, "training": t} for p, t in new_state.actions],
            "overlayTriples": len(new_state.overlay),
        }

    @app.delete("/whatif/{session_id}")
    def drop_session(session_id: str):
        if not sessions.drop(session_id):
            raise UnknownSessionError(f"unknown session: {session_id}")
        return {"session": session_id, "status": "deleted"}

    return app

"""HTTP session service: the terminal assistant's semantics over JSON/REST.

Endpoints::

    POST /sessions                {"n": int, "semantics"?} or {"tree": name}
    GET  /sessions/{id}/next      next weighing, or {"done": true, "result": ...}
    POST /sessions/{id}/outcome   {"outcome": "<" | "=" | ">"}
    GET  /sessions/{id}           id, status, full history, result

A contradictory outcome (impossible for every remaining hypothesis) returns
409 and leaves the session state untouched, as does a concurrent mutation on
the same session.
"""

from __future__ import annotations

import os
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .composition import ContradictoryOutcome
from .core import DIGIT_OF_SYMBOL, Semantics
from .session import SessionBusy, SessionStore
from .strategies import PACKAGED_TABLES, load_table, packaged_tree, table_to_tree


class CreateSession(BaseModel):
    n: Optional[int] = None
    tree: Optional[str] = None
    semantics: str = "sort"


class OutcomeBody(BaseModel):
    outcome: str


def create_app(log_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="weighwright", version="0.1.0")
    # the browser companion is served from a different origin (or file://)
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    store = SessionStore(log_dir=log_dir)
    app.state.store = store

    @app.post("/sessions")
    def create_session(body: CreateSession):
        try:
            semantics = Semantics(body.semantics)
        except ValueError:
            raise HTTPException(422, f"unknown semantics {body.semantics!r}")
        if (body.n is None) == (body.tree is None):
            raise HTTPException(422, "provide exactly one of 'n' or 'tree'")
        try:
            if body.tree is not None:
                tree = _resolve_tree(body.tree, semantics)
                session = store.create(tree=tree, semantics=semantics, label=body.tree)
            else:
                if body.n < 1:
                    raise HTTPException(422, "n must be positive")
                session = store.create(n=body.n, semantics=semantics)
        except FileNotFoundError as exc:
            raise HTTPException(404, str(exc))
        return {"id": session.id, "n": session.n, "semantics": session.semantics.value}

    @app.get("/sessions/{session_id}/next")
    def next_weighing(session_id: str):
        return _get(session_id).next_doc()

    @app.post("/sessions/{session_id}/outcome")
    def submit_outcome(session_id: str, body: OutcomeBody):
        session = _get(session_id)
        if body.outcome not in DIGIT_OF_SYMBOL:
            raise HTTPException(422, "outcome must be one of <, =, >")
        if session.finished:
            raise HTTPException(409, "session already finished")
        try:
            session.submit_symbol(body.outcome)
        except ContradictoryOutcome as exc:
            raise HTTPException(409, f"contradictory outcome history: {exc}")
        except SessionBusy:
            raise HTTPException(409, "another outcome for this session is in flight")
        return session.state_doc()

    @app.get("/sessions/{session_id}")
    def session_state(session_id: str):
        return _get(session_id).state_doc()

    def _get(session_id: str):
        try:
            return store.get(session_id)
        except KeyError:
            raise HTTPException(404, f"no session {session_id}")

    return app


def _resolve_tree(ref: str, semantics: Semantics):
    if ref in PACKAGED_TABLES:
        return packaged_tree(ref, semantics=semantics)
    if os.path.exists(ref):
        return table_to_tree(load_table(ref))
    raise FileNotFoundError(f"no packaged table or file named {ref!r}")


app = create_app()

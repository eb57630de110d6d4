"""HTTP JSON API for interactive strategy validation sessions.

The browser client consumes exactly this surface: create a session from a
bundled model name or raw BDDL text, poll session state (board matrix, ply,
legal White moves with footprints), submit White moves, and fetch the
transcript.  The server is authoritative for all rules; a session handles
one request at a time.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from . import corpus
from .parser import BddlError, parse_domain, parse_problem
from .play import (
    MalformedMove,
    PlaySession,
    SessionFinished,
    SessionRefused,
    start_session,
    submit_white_move,
)
from .semantics import Move, Side


class CreateSessionRequest(BaseModel):
    model: str | None = None
    domain: str | None = None
    problem: str | None = None
    depth: int | None = None
    mode: str = "interactive"


class MoveRequest(BaseModel):
    action: int | str
    x: int
    y: int


def session_view(session: PlaySession) -> dict:
    inst = session.inst
    board = [
        [session.state.at(i, j).value for i in range(1, inst.m + 1)]
        for j in range(1, inst.n + 1)
    ]
    legal = []
    if session.status == "awaiting-white":
        game_actions = session.dom.white_actions
        for move, successor in session.white_moves():
            footprint = [
                [i, j]
                for j in range(1, inst.n + 1)
                for i in range(1, inst.m + 1)
                if successor.at(i, j) is not session.state.at(i, j)
                or _mentions(session, move, i, j)
            ]
            legal.append(
                {
                    "actionIndex": move.action_index,
                    "action": game_actions[move.action_index].name,
                    "x": move.i,
                    "y": move.j,
                    "footprint": footprint,
                }
            )
    last_move = None
    for entry in reversed(session.history):
        if entry.event in ("black-move", "white-move"):
            last_move = {
                "side": entry.move.side.value,
                "actionIndex": entry.move.action_index,
                "x": entry.move.i,
                "y": entry.move.j,
            }
            break
    return {
        "sessionId": session.session_id,
        "m": inst.m,
        "n": inst.n,
        "depth": inst.depth,
        "board": board,
        "ply": session.ply,
        "status": session.status,
        "sideToMove": session.side_to_move.value if session.side_to_move else None,
        "legalWhiteMoves": legal,
        "verdict": session.verdict.value if session.verdict else None,
        "valid": session.valid,
        "outcome": session.outcome.value if session.outcome else None,
        "diagnostic": session.diagnostic,
        "lastMove": last_move,
    }


def _mentions(session: PlaySession, move: Move, i: int, j: int) -> bool:
    action = session.dom.white_actions[move.action_index]
    for sub in action.eff:
        if sub.x.substitute(move.i, session.inst.m) == i and sub.y.substitute(
            move.j, session.inst.n
        ) == j:
            return True
    return False


def transcript_view(session: PlaySession) -> dict:
    entries = []
    for entry in session.history:
        entries.append(
            {
                "ply": entry.ply,
                "event": entry.event,
                "move": None
                if entry.move is None
                else {
                    "side": entry.move.side.value,
                    "actionIndex": entry.move.action_index,
                    "x": entry.move.i,
                    "y": entry.move.j,
                },
                "detail": entry.detail,
            }
        )
    return {"sessionId": session.session_id, "entries": entries}


def create_app() -> FastAPI:
    app = FastAPI(title="bddlqbf play service")
    sessions: dict[str, PlaySession] = {}
    locks: dict[str, threading.Lock] = {}
    registry_lock = threading.Lock()

    @app.get("/models")
    def models() -> dict:
        return {"models": corpus.list_models()}

    @app.post("/sessions", status_code=201)
    def create_session(req: CreateSessionRequest) -> dict:
        import dataclasses

        try:
            if req.model:
                dom, inst = corpus.load_model(req.model)
            elif req.domain and req.problem:
                dom = parse_domain(req.domain)
                inst = parse_problem(req.problem)
            else:
                raise HTTPException(400, "provide either model or domain+problem text")
            if req.depth is not None:
                inst = dataclasses.replace(inst, depth=req.depth)
        except KeyError as exc:
            raise HTTPException(404, str(exc)) from exc
        except BddlError as exc:
            raise HTTPException(400, str(exc)) from exc
        try:
            session = start_session(dom, inst, mode=req.mode)
        except SessionRefused as exc:
            raise HTTPException(409, str(exc)) from exc
        except ValueError as exc:
            raise HTTPException(400, str(exc)) from exc
        with registry_lock:
            sessions[session.session_id] = session
            locks[session.session_id] = threading.Lock()
        return session_view(session)

    def _get(session_id: str) -> tuple[PlaySession, threading.Lock]:
        with registry_lock:
            session = sessions.get(session_id)
            lock = locks.get(session_id)
        if session is None:
            raise HTTPException(404, f"no session {session_id}")
        return session, lock

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        session, lock = _get(session_id)
        with lock:
            return session_view(session)

    @app.post("/sessions/{session_id}/move")
    def post_move(session_id: str, req: MoveRequest) -> dict:
        session, lock = _get(session_id)
        with lock:
            if isinstance(req.action, str):
                names = [a.name for a in session.dom.white_actions]
                if req.action not in names:
                    raise HTTPException(422, f"unknown white action {req.action!r}")
                index = names.index(req.action)
            else:
                index = req.action
            move = Move(Side.WHITE, index, req.x, req.y)
            try:
                submit_white_move(session, move)
            except MalformedMove as exc:
                raise HTTPException(422, str(exc)) from exc
            except SessionFinished as exc:
                raise HTTPException(409, str(exc)) from exc
            return session_view(session)

    @app.get("/sessions/{session_id}/transcript")
    def get_transcript(session_id: str) -> dict:
        session, lock = _get(session_id)
        with lock:
            return transcript_view(session)

    return app


app = create_app()

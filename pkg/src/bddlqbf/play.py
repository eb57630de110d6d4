"""Interactive winning-strategy validation: a human (or scripted adversary)
plays White against a certified strategy provider playing Black.

A session only starts when the provider certifies that Black wins within the
instance depth.  Legality of White moves is checked against the explicit
game semantics; in validation mode an illegal attempt ends the session as a
Black win, mirroring the encoding where illegal White play satisfies the
formula, while interactive mode re-prompts with a diagnostic.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field
from enum import Enum

from .oracle import NotWinningError, Oracle
from .semantics import (
    BoardState,
    Move,
    Side,
    Verdict,
    grounded,
    initial_state,
    legal_moves,
)
from .syntax import GameDomain, GameInstance


class SessionRefused(Exception):
    """No winning strategy at the requested depth: nothing to validate."""


class MalformedMove(Exception):
    """Bad action index or off-board anchor; the session is left unchanged."""


class SessionFinished(Exception):
    pass


class PlayOutcome(Enum):
    BLACK_GOAL = "black goal reached"
    WHITE_STUCK = "white has no legal move"
    ILLEGAL_WHITE = "white attempted an illegal move"
    WHITE_GOAL = "white goal reached"
    BLACK_STUCK = "black has no legal move"
    DEPTH_EXHAUSTED = "depth exhausted without a black win"


_VERDICT_OF_OUTCOME = {
    PlayOutcome.BLACK_GOAL: Verdict.BLACK_WINS_BY_GOAL,
    PlayOutcome.WHITE_STUCK: Verdict.BLACK_WINS_OPPONENT_STUCK,
    PlayOutcome.ILLEGAL_WHITE: Verdict.BLACK_WINS_OPPONENT_STUCK,
    PlayOutcome.WHITE_GOAL: Verdict.WHITE_WINS_BY_GOAL,
    PlayOutcome.BLACK_STUCK: Verdict.WHITE_WINS_OPPONENT_STUCK,
    PlayOutcome.DEPTH_EXHAUSTED: Verdict.UNDECIDED,
}

_BLACK_WINS = (PlayOutcome.BLACK_GOAL, PlayOutcome.WHITE_STUCK, PlayOutcome.ILLEGAL_WHITE)


class OracleStrategyProvider:
    """The shipped provider: strategy moves extracted from the search oracle.

    The provider interface (certify + move) is the seam where a QBF
    certificate + SAT-assumption provider could be plugged in instead.
    """

    def __init__(self, dom: GameDomain, inst: GameInstance):
        self._oracle = Oracle(dom, inst)
        self._inst = inst

    def certifies_win(self) -> bool:
        return self._oracle.black_wins_within(
            self._oracle.game.initial, self._inst.depth, Side.BLACK
        )

    def move(self, state: BoardState, plies_remaining: int) -> Move:
        return self._oracle.strategy_move(state, plies_remaining)


@dataclass(frozen=True)
class HistoryEntry:
    ply: int
    event: str  # "black-move" | "white-move" | "illegal-attempt" | "malformed-attempt"
    move: Move | None
    detail: str
    board: BoardState  # board after the event


@dataclass
class PlaySession:
    session_id: str
    dom: GameDomain
    inst: GameInstance
    provider: OracleStrategyProvider
    mode: str  # "validation" | "interactive"
    ply: int = 1
    state: BoardState = None  # type: ignore[assignment]
    history: list[HistoryEntry] = field(default_factory=list)
    status: str = "black-thinking"  # "awaiting-white" | "black-thinking" | "finished"
    outcome: PlayOutcome | None = None
    diagnostic: str | None = None

    @property
    def depth(self) -> int:
        return self.inst.depth

    @property
    def side_to_move(self) -> Side | None:
        if self.status == "finished":
            return None
        return Side.BLACK if self.ply % 2 == 1 else Side.WHITE

    @property
    def verdict(self) -> Verdict | None:
        return _VERDICT_OF_OUTCOME[self.outcome] if self.outcome else None

    @property
    def valid(self) -> bool | None:
        """Valid = Black won this completed play; Invalid = the strategy failed."""
        if self.outcome is None:
            return None
        return self.outcome in _BLACK_WINS

    def fork(self) -> "PlaySession":
        """Copy for adversarial enumeration; the provider (and its memo) is shared."""
        twin = PlaySession(
            session_id=str(uuid.uuid4()),
            dom=self.dom,
            inst=self.inst,
            provider=self.provider,
            mode=self.mode,
            ply=self.ply,
            state=self.state,
            history=list(self.history),
            status=self.status,
            outcome=self.outcome,
            diagnostic=self.diagnostic,
        )
        return twin

    def white_moves(self) -> list[tuple[Move, BoardState]]:
        return legal_moves(self.dom, self.state, Side.WHITE)


def start_session(
    dom: GameDomain,
    inst: GameInstance,
    mode: str = "validation",
    provider: OracleStrategyProvider | None = None,
) -> PlaySession:
    """Open a session with Black's first strategy move already applied."""
    if mode not in ("validation", "interactive"):
        raise ValueError(f"unknown session mode {mode!r}")
    provider = provider or OracleStrategyProvider(dom, inst)
    if hasattr(provider, "certifies_win") and not provider.certifies_win():
        raise SessionRefused(
            f"no winning strategy for Black within depth {inst.depth}; nothing to validate"
        )
    session = PlaySession(
        session_id=str(uuid.uuid4()),
        dom=dom,
        inst=inst,
        provider=provider,
        mode=mode,
        state=initial_state(inst),
    )
    _black_turn(session)
    return session


def _finish(session: PlaySession, outcome: PlayOutcome) -> None:
    session.status = "finished"
    session.outcome = outcome


def _black_turn(session: PlaySession) -> None:
    game = grounded(session.dom, session.inst)
    plies_remaining = session.depth - session.ply + 1
    try:
        move = session.provider.move(session.state, plies_remaining)
    except NotWinningError:
        # test doubles may steer into losing ground; classify how it ended
        if not legal_moves(session.dom, session.state, Side.BLACK):
            _finish(session, PlayOutcome.BLACK_STUCK)
        else:
            _finish(session, PlayOutcome.DEPTH_EXHAUSTED)
        return
    session.state = _apply(session, move)
    session.history.append(
        HistoryEntry(session.ply, "black-move", move, "", session.state)
    )
    session.ply += 1
    packed = game.encode_state(session.state)
    if game.won(packed, Side.BLACK):
        _finish(session, PlayOutcome.BLACK_GOAL)
    elif session.ply > session.depth:
        _finish(session, PlayOutcome.DEPTH_EXHAUSTED)
    elif not game.has_move(packed, Side.WHITE):
        _finish(session, PlayOutcome.WHITE_STUCK)
    else:
        session.status = "awaiting-white"


def _apply(session: PlaySession, move: Move) -> BoardState:
    for legal, successor in legal_moves(session.dom, session.state, move.side):
        if legal == move:
            return successor
    raise AssertionError("apply called with a non-legal move")


def submit_white_move(session: PlaySession, move: Move) -> PlaySession:
    """Check and apply the human's White move, then let Black reply.

    Malformed moves raise and change nothing.  Illegal-but-well-formed moves
    end the session as a Black win in validation mode and re-prompt (with the
    diagnostic stored on the session) in interactive mode.
    """
    if session.status == "finished":
        raise SessionFinished("session already finished")
    if session.status != "awaiting-white":
        raise SessionFinished("not White's turn")
    session.diagnostic = None
    actions = session.dom.white_actions
    if move.side is not Side.WHITE:
        raise MalformedMove("only White moves can be submitted")
    if not 0 <= move.action_index < len(actions):
        session.history.append(
            HistoryEntry(session.ply, "malformed-attempt", move, "bad action index", session.state)
        )
        raise MalformedMove(
            f"action index {move.action_index} out of range (white has {len(actions)} actions)"
        )
    if not (1 <= move.i <= session.inst.m and 1 <= move.j <= session.inst.n):
        session.history.append(
            HistoryEntry(session.ply, "malformed-attempt", move, "anchor off board", session.state)
        )
        raise MalformedMove(f"anchor ({move.i},{move.j}) is off the board")

    for legal, successor in session.white_moves():
        if legal == move:
            session.state = successor
            session.history.append(
                HistoryEntry(session.ply, "white-move", move, "", session.state)
            )
            session.ply += 1
            game = grounded(session.dom, session.inst)
            packed = game.encode_state(session.state)
            if game.won(packed, Side.WHITE):
                _finish(session, PlayOutcome.WHITE_GOAL)
            elif session.ply > session.depth:
                _finish(session, PlayOutcome.DEPTH_EXHAUSTED)
            elif not game.has_move(packed, Side.BLACK):
                _finish(session, PlayOutcome.BLACK_STUCK)
            else:
                _black_turn(session)
            return session

    name = actions[move.action_index].name
    detail = f"{name} at ({move.i},{move.j}) is not legal in this position"
    session.history.append(
        HistoryEntry(session.ply, "illegal-attempt", move, detail, session.state)
    )
    if session.mode == "validation":
        _finish(session, PlayOutcome.ILLEGAL_WHITE)
    else:
        session.diagnostic = detail
    return session


def render_board(session: PlaySession) -> str:
    """Text grid, row 1 at the top, plus a ply/status banner."""
    symbols = {"black": "B", "white": "W", "open": "."}
    lines = []
    for j in range(1, session.inst.n + 1):
        lines.append(" ".join(symbols[session.state.at(i, j).value] for i in range(1, session.inst.m + 1)))
    if session.status == "finished":
        banner = f"ply {session.ply - 1}/{session.depth} finished: {session.outcome.value}"
    else:
        banner = f"ply {session.ply}/{session.depth} {session.status}"
    return "\n".join(lines + [banner])


def session_verdict(session: PlaySession) -> tuple[Verdict, list[HistoryEntry]]:
    """Final verdict and the full replayable transcript."""
    if session.status != "finished":
        raise SessionFinished("session still in progress")
    return session.verdict, list(session.history)


def replay_transcript(
    dom: GameDomain, inst: GameInstance, history: list[HistoryEntry]
) -> BoardState:
    """Re-apply the recorded moves from the initial state; returns final board."""
    state = initial_state(inst)
    for entry in history:
        if entry.event in ("black-move", "white-move"):
            matched = [s for mv, s in legal_moves(dom, state, entry.move.side) if mv == entry.move]
            assert matched, "transcript contains a non-legal move"
            state = matched[0]
    return state


def enumerate_white_plays(
    dom: GameDomain, inst: GameInstance, provider: OracleStrategyProvider | None = None
) -> list[PlaySession]:
    """Every complete play against the provider under exhaustive White replies."""
    root = start_session(dom, inst, provider=provider)
    finished: list[PlaySession] = []
    frontier = [root]
    while frontier:
        session = frontier.pop()
        if session.status == "finished":
            finished.append(session)
            continue
        for move, _ in session.white_moves():
            fork = session.fork()
            submit_white_move(fork, move)
            frontier.append(fork)
    return finished

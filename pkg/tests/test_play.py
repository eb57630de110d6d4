import random

import pytest

from bddlqbf.oracle import Oracle
from bddlqbf.play import (
    MalformedMove,
    PlayOutcome,
    SessionFinished,
    SessionRefused,
    enumerate_white_plays,
    render_board,
    replay_transcript,
    session_verdict,
    start_session,
    submit_white_move,
)
from bddlqbf.semantics import Move, Side, Verdict, legal_moves
from helpers import load


def test_session_refused_without_winning_strategy():
    dom, inst = load("connect3-3x3")
    with pytest.raises(SessionRefused, match="no winning strategy"):
        start_session(dom, inst)


def test_session_opens_with_black_move_applied():
    dom, inst = load("tic-5x4")
    session = start_session(dom, inst)
    assert session.status == "awaiting-white"
    assert session.ply == 2
    assert session.history[0].event == "black-move"


def test_depth1_session_finishes_immediately():
    dom, inst = load("positional-1x1")
    session = start_session(dom, inst)
    assert session.status == "finished"
    assert session.outcome is PlayOutcome.BLACK_GOAL
    assert session.valid is True


def test_domineering_2x2_white_stuck_at_once():
    dom, inst = load("domineering-2x2")
    session = start_session(dom, inst)
    assert session.status == "finished"
    assert session.outcome is PlayOutcome.WHITE_STUCK
    assert session.verdict is Verdict.BLACK_WINS_OPPONENT_STUCK


def test_legal_white_move_advances_two_plies():
    dom, inst = load("tic-5x4")
    session = start_session(dom, inst)
    before = session.ply
    move, _ = session.white_moves()[0]
    submit_white_move(session, move)
    assert session.status in ("awaiting-white", "finished")
    if session.status == "awaiting-white":
        assert session.ply == before + 2  # white moved, black replied


def test_malformed_moves_rejected_without_state_change():
    dom, inst = load("tic-5x4")
    session = start_session(dom, inst)
    state_before, ply_before = session.state, session.ply
    with pytest.raises(MalformedMove, match="out of range"):
        submit_white_move(session, Move(Side.WHITE, 7, 1, 1))
    with pytest.raises(MalformedMove, match="off the board"):
        submit_white_move(session, Move(Side.WHITE, 0, 9, 1))
    with pytest.raises(MalformedMove, match="only White"):
        submit_white_move(session, Move(Side.BLACK, 0, 1, 1))
    assert session.state == state_before and session.ply == ply_before
    assert [e.event for e in session.history].count("malformed-attempt") == 2


def test_illegal_move_ends_validation_session_as_black_win():
    dom, inst = load("tic-5x4")
    session = start_session(dom, inst, mode="validation")
    occupied = next(
        (i, j)
        for j in range(1, inst.n + 1)
        for i in range(1, inst.m + 1)
        if session.state.at(i, j).value != "open"
    )
    submit_white_move(session, Move(Side.WHITE, 0, *occupied))
    assert session.status == "finished"
    assert session.outcome is PlayOutcome.ILLEGAL_WHITE
    assert session.valid is True
    assert session.verdict is Verdict.BLACK_WINS_OPPONENT_STUCK


def test_illegal_move_reprompts_in_interactive_mode():
    dom, inst = load("tic-5x4")
    session = start_session(dom, inst, mode="interactive")
    occupied = next(
        (i, j)
        for j in range(1, inst.n + 1)
        for i in range(1, inst.m + 1)
        if session.state.at(i, j).value != "open"
    )
    submit_white_move(session, Move(Side.WHITE, 0, *occupied))
    assert session.status == "awaiting-white"
    assert session.diagnostic and "not legal" in session.diagnostic
    assert session.history[-1].event == "illegal-attempt"


def test_render_board_shape_and_markers():
    dom, inst = load("tic-5x4")
    session = start_session(dom, inst)
    text = render_board(session)
    rows = text.splitlines()
    assert len(rows) == inst.n + 1  # banner line at the end
    grid = [row.split() for row in rows[:-1]]
    assert all(len(row) == inst.m for row in grid)
    assert grid[3][1] == "W"  # white(2,4): row 4 printed last-but-banner
    assert "ply" in rows[-1]


def test_render_differs_exactly_in_effect_cells():
    dom, inst = load("tic-5x4")
    session = start_session(dom, inst)
    before = render_board(session).splitlines()[:-1]
    move, _ = session.white_moves()[0]
    submit_white_move(session, move)
    after = render_board(session).splitlines()[:-1]
    changed = {
        (i + 1, j + 1)
        for j, (rowb, rowa) in enumerate(zip(before, after))
        for i, (cb, ca) in enumerate(zip(rowb.split(), rowa.split()))
        if cb != ca
    }
    # one white stone and one black reply (positional effects touch one cell each)
    assert len(changed) == 2 if session.status != "finished" else len(changed) >= 1


def test_session_verdict_requires_finished():
    dom, inst = load("tic-5x4")
    session = start_session(dom, inst)
    with pytest.raises(SessionFinished):
        session_verdict(session)


def test_completed_session_verdict_and_replay():
    dom, inst = load("lines2-3x3")
    session = start_session(dom, inst)
    rng = random.Random(1)
    while session.status == "awaiting-white":
        move, _ = rng.choice(session.white_moves())
        submit_white_move(session, move)
    verdict, transcript = session_verdict(session)
    assert session.valid is True  # oracle strategy always wins
    final = replay_transcript(dom, inst, transcript)
    assert final == session.state


def test_replay_determinism():
    dom, inst = load("tictactoe-3x3")
    def run():
        session = start_session(dom, inst)
        rng = random.Random(99)
        while session.status == "awaiting-white":
            move, _ = rng.choice(session.white_moves())
            submit_white_move(session, move)
        return [(e.ply, e.event, e.move) for e in session.history], session.state
    assert run() == run()


@pytest.mark.parametrize("name", ["domineering-2x2", "connect2-2x2", "lines2-3x3", "tictactoe-3x3"])
def test_exhaustive_adversary_always_loses(name):
    """Every complete White reply sequence ends in a Black win: the operational
    meaning of a depth-d winning strategy."""
    dom, inst = load(name)
    plays = enumerate_white_plays(dom, inst)
    assert plays, "expected at least one complete play"
    for play in plays:
        assert play.valid is True, [e.event for e in play.history]


def test_legality_agreement_randomized_attempts():
    """The session's legal/illegal classification matches the move generator."""
    rng = random.Random(13)
    for name in ("tic-5x4", "domineering-3x3", "connect2-3x3", "evader-pursuer-4x4"):
        dom, inst = load(name)
        base = start_session(dom, inst)
        if base.status != "awaiting-white":
            continue
        legal_now = {(m.action_index, m.i, m.j) for m, _ in base.white_moves()}
        for _ in range(1000):
            attempt = (
                rng.randrange(len(dom.white_actions)),
                rng.randint(1, inst.m),
                rng.randint(1, inst.n),
            )
            session = base.fork()
            submit_white_move(session, Move(Side.WHITE, *attempt))
            if attempt in legal_now:
                assert session.history[-1].event in ("white-move", "black-move")
            else:
                assert session.outcome is PlayOutcome.ILLEGAL_WHITE


def test_bad_provider_yields_invalid_verdict():
    """A provider that deliberately throws the win away fails validation."""
    dom, inst = load("lines2-3x3")
    oracle = Oracle(dom, inst)
    game = oracle.game

    class Saboteur:
        def certifies_win(self):
            return True

        def move(self, state, plies_remaining):
            options = legal_moves(dom, state, Side.BLACK)
            for mv, succ in options:
                packed = game.encode_state(succ)
                if not game.won(packed, Side.BLACK) and not oracle.black_wins_within(
                    packed, plies_remaining - 1, Side.WHITE
                ):
                    return mv  # a certified losing move
            return options[0][0]

    session = start_session(dom, inst, provider=Saboteur())
    while session.status == "awaiting-white":
        plies_left = inst.depth - session.ply + 1
        refutation = None
        for mv, succ in session.white_moves():
            packed = game.encode_state(succ)
            if game.won(packed, Side.WHITE) or not oracle.black_wins_within(
                packed, plies_left - 1, Side.BLACK
            ):
                refutation = mv
                break
        submit_white_move(session, refutation or session.white_moves()[0][0])
    assert session.status == "finished"
    assert session.valid is False
    assert session.outcome in (
        PlayOutcome.DEPTH_EXHAUSTED,
        PlayOutcome.WHITE_GOAL,
        PlayOutcome.BLACK_STUCK,
    )


def test_fork_isolated_from_parent():
    dom, inst = load("tictactoe-3x3")
    session = start_session(dom, inst)
    fork = session.fork()
    move, _ = session.white_moves()[0]
    submit_white_move(fork, move)
    assert session.status == "awaiting-white"
    assert fork.ply != session.ply or fork.status == "finished"

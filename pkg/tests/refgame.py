"""Reference game semantics for judging the search oracle.

Everything here works directly on BoardState objects through the condition
satisfaction functions, never through the packed bit-mask representation the
oracle searches on, and never through memoization.
"""

from __future__ import annotations

from bddlqbf.semantics import BoardState, condition_holds_at, state_won_by
from bddlqbf.syntax import GameDomain, GameInstance, action_bounds


def ref_successors(dom: GameDomain, state: BoardState, side_black: bool) -> list[BoardState]:
    actions = dom.black_actions if side_black else dom.white_actions
    out = []
    for act in actions:
        for i, j in action_bounds(act, state.m, state.n).positions():
            if not condition_holds_at(state, act.pre, i, j):
                continue
            updates = {}
            consistent = True
            for sub in act.eff:
                cell = (sub.x.substitute(i, state.m), sub.y.substitute(j, state.n))
                if updates.get(cell, sub.pred) is not sub.pred:
                    consistent = False  # contradictory effect: no such transition
                updates[cell] = sub.pred
            if consistent:
                out.append(state.with_cells(updates))
    return out


def win_k_literal(dom: GameDomain, inst: GameInstance, state: BoardState, k: int) -> bool:
    """Membership in the winning set for odd k, written exactly as the
    inductive definition: base case one winning Black move, inductive case a
    Black move after which either the goal holds or every White reply is
    non-winning for White and lands back in the k-2 set."""
    assert k % 2 == 1
    succs_b = ref_successors(dom, state, True)
    if k == 1:
        return any(state_won_by(s2, inst.black_goals) for s2 in succs_b)
    for s2 in succs_b:
        if state_won_by(s2, inst.black_goals):
            return True
        if all(
            (not state_won_by(s3, inst.white_goals)) and win_k_literal(dom, inst, s3, k - 2)
            for s3 in ref_successors(dom, s2, False)
        ):
            return True
    return False


def ref_ply(dom: GameDomain, inst: GameInstance, state: BoardState, k: int, side_black: bool) -> bool:
    """Ply-by-ply evaluation for any parity: goals checked after the mover's
    move, a stuck mover loses, depth exhaustion means no Black win."""
    if k == 0:
        return False
    succs = ref_successors(dom, state, side_black)
    if not succs:
        return not side_black
    if side_black:
        return any(
            state_won_by(s2, inst.black_goals) or ref_ply(dom, inst, s2, k - 1, False)
            for s2 in succs
        )
    for s2 in succs:
        if state_won_by(s2, inst.white_goals):
            return False
        if not ref_ply(dom, inst, s2, k - 1, True):
            return False
    return True

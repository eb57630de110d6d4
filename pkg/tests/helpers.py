"""Shared fixtures: corpus access with depth overrides, BDD variable orders,
and play restrictions for driving the encoded circuit along a concrete game."""

from __future__ import annotations

import dataclasses

from bddlqbf.corpus import list_models, load_model
from bddlqbf.encoder import EncodedInstance, VarLayout
from bddlqbf.semantics import Move, Side
from bddlqbf.syntax import GameDomain, GameInstance


def load(name: str, depth: int | None = None) -> tuple[GameDomain, GameInstance]:
    dom, inst = load_model(name)
    if depth is not None:
        inst = dataclasses.replace(inst, depth=depth)
    return dom, inst


def expansion_scale_models() -> list[str]:
    """Bundled instances small enough for full-expansion agreement checks."""
    out = []
    for name in list_models():
        _, inst = load_model(name)
        if inst.m * inst.n <= 12 and inst.depth <= 5:
            out.append(name)
    return out


def interleaved_order(layout: VarLayout) -> list[int]:
    """BDD variable order: symbolic position on top, then states interleaved
    with the move steps that relate them, goal blocks at the bottom."""
    order = list(layout.sx) + list(layout.sy)
    for sv in layout.steps:
        o, w = layout.states[sv.step - 1]
        order += [o, w]
        order += list(sv.action) + list(sv.x) + list(sv.y)
        if sv.gamestop is not None:
            order.append(sv.gamestop)
        if sv.legal is not None:
            order.append(sv.legal)
        order += list(sv.preflags)
    order += list(layout.states[-1])
    order += list(layout.bx) + list(layout.by) + list(layout.bc)
    order += list(layout.wx) + list(layout.wy) + list(layout.wc)
    order += list(layout.wce)
    return order


def set_word(restrict: dict[int, bool], var_ids, value: int) -> None:
    for bit, var in enumerate(var_ids):
        restrict[var] = bool((value >> bit) & 1)


def play_restriction(
    enc: EncodedInstance, moves: list[Move], black_claim_step: int | None = None
) -> dict[int, bool]:
    """Pin the move words of a play prefix onto the circuit.

    Black game-stop bits are 0 except at `black_claim_step` (the step after
    whose move Black claims its goal); White game-stops and all indicator,
    goal, and state variables stay quantified.
    """
    restrict: dict[int, bool] = {}
    for step_index, move in enumerate(moves, start=1):
        sv = enc.layout.steps[step_index - 1]
        expected = Side.BLACK if step_index % 2 == 1 else Side.WHITE
        assert move.side is expected
        set_word(restrict, sv.action, move.action_index)
        set_word(restrict, sv.x, move.i)
        set_word(restrict, sv.y, move.j)
        if sv.side is Side.BLACK and sv.gamestop is not None:
            restrict[sv.gamestop] = step_index == black_claim_step
    return restrict

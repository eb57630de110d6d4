"""Explicit game semantics: states, condition satisfaction, moves, goal checks.

This module is the ground truth the QBF encoding is tested against.  Public
functions operate on :class:`BoardState`; the :class:`GroundedGame` helper
precompiles a domain/instance pair into bit-mask form (two bits per cell
packed into a single int) so search stays fast on desk-scale boards.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .syntax import (
    ActionDef,
    Condition,
    GameDomain,
    GameInstance,
    Pred,
    SubCondition,
    action_bounds,
    bounds_of_condition,
    bounds_of_subcondition,
)


class Side(Enum):
    BLACK = "black"
    WHITE = "white"

    @property
    def other(self) -> "Side":
        return Side.WHITE if self is Side.BLACK else Side.BLACK


class Verdict(Enum):
    BLACK_WINS_BY_GOAL = "black wins by goal"
    WHITE_WINS_BY_GOAL = "white wins by goal"
    BLACK_WINS_OPPONENT_STUCK = "black wins, white cannot move"
    WHITE_WINS_OPPONENT_STUCK = "white wins, black cannot move"
    UNDECIDED = "undecided"


class ModelError(Exception):
    """A model construct the explicit semantics cannot execute."""


# cell encodings inside packed state ints
_OPEN, _BLACK, _WHITE = 0, 1, 2
_CELL_OF_PRED = {Pred.OPEN: _OPEN, Pred.BLACK: _BLACK, Pred.WHITE: _WHITE}
_PRED_OF_CELL = {_OPEN: Pred.OPEN, _BLACK: Pred.BLACK, _WHITE: Pred.WHITE}


@dataclass(frozen=True)
class BoardState:
    """Total map from [1..m] x [1..n] to a cell predicate."""

    m: int
    n: int
    cells: tuple[Pred, ...]  # row-major, index (j-1)*m + (i-1)

    def __post_init__(self) -> None:
        if len(self.cells) != self.m * self.n:
            raise ValueError("cells must cover the whole board")

    def at(self, i: int, j: int) -> Pred:
        if not (1 <= i <= self.m and 1 <= j <= self.n):
            raise IndexError(f"({i},{j}) outside the {self.m}x{self.n} board")
        return self.cells[(j - 1) * self.m + (i - 1)]

    def with_cells(self, updates: dict[tuple[int, int], Pred]) -> "BoardState":
        cells = list(self.cells)
        for (i, j), pred in updates.items():
            cells[(j - 1) * self.m + (i - 1)] = pred
        return BoardState(self.m, self.n, tuple(cells))


@dataclass(frozen=True)
class Move:
    side: Side
    action_index: int  # 0-based into the side's action list
    i: int
    j: int


def initial_state(inst: GameInstance) -> BoardState:
    cells = [Pred.OPEN] * (inst.m * inst.n)
    for pred, i, j in inst.init:
        cells[(j - 1) * inst.m + (i - 1)] = pred
    return BoardState(inst.m, inst.n, tuple(cells))


def holds_at(state: BoardState, sub: SubCondition, i: int, j: int) -> bool:
    """Truth of one sub-condition literal at anchor (i, j).

    The anchor must lie inside the literal's implicit bounds; violating that
    is a programming error, not a game outcome.
    """
    assert bounds_of_subcondition(sub, state.m, state.n).contains(i, j), (
        f"anchor ({i},{j}) outside bounds of {sub.render()}"
    )
    ci = sub.x.substitute(i, state.m)
    cj = sub.y.substitute(j, state.n)
    result = state.at(ci, cj) is sub.pred
    return not result if sub.negated else result


def condition_holds_at(state: BoardState, cond: Condition, i: int, j: int) -> bool:
    return all(holds_at(state, sub, i, j) for sub in cond)


def state_won_by(state: BoardState, goals: tuple[Condition, ...]) -> bool:
    """True iff some goal condition holds at some in-bounds anchor."""
    for cond in goals:
        for i, j in bounds_of_condition(cond, state.m, state.n).positions():
            if condition_holds_at(state, cond, i, j):
                return True
    return False


# -- grounded (bit-mask) form ------------------------------------------------


@dataclass(frozen=True)
class GroundedMove:
    action_index: int
    i: int
    j: int
    pre_mask: int
    pre_val: int
    pre_negs: tuple[tuple[int, int], ...]  # (bit shift, forbidden cell value)
    eff_mask: int
    eff_val: int


def _compile_pattern(
    cond: Condition, i: int, j: int, m: int, n: int
) -> tuple[int, int, tuple[tuple[int, int], ...]] | None:
    """Masks for 'cond holds at (i,j)': (eq_mask, eq_val, neq checks).

    Returns None when two positive literals demand different values of the
    same cell: such a pattern can never hold.
    """
    required: dict[int, int] = {}
    negs: list[tuple[int, int]] = []
    for sub in cond:
        ci = sub.x.substitute(i, m)
        cj = sub.y.substitute(j, n)
        if not (1 <= ci <= m and 1 <= cj <= n):
            raise ModelError(
                f"condition {cond.render()} references off-board cell ({ci},{cj})"
            )
        shift = 2 * ((cj - 1) * m + (ci - 1))
        cell = _CELL_OF_PRED[sub.pred]
        if sub.negated:
            negs.append((shift, cell))
        elif required.setdefault(shift, cell) != cell:
            return None
    mask = 0
    val = 0
    for shift, cell in required.items():
        mask |= 3 << shift
        val |= cell << shift
    return mask, val, tuple(negs)


class GroundedGame:
    """A domain/instance pair compiled to packed-int states and mask checks."""

    def __init__(self, dom: GameDomain, inst: GameInstance):
        self.dom = dom
        self.inst = inst
        self.m, self.n = inst.m, inst.n
        self.moves: dict[Side, tuple[GroundedMove, ...]] = {
            Side.BLACK: self._compile_moves(dom.black_actions),
            Side.WHITE: self._compile_moves(dom.white_actions),
        }
        self.goal_patterns: dict[Side, tuple[tuple[int, int, tuple], ...]] = {
            Side.BLACK: self._compile_goals(inst.black_goals),
            Side.WHITE: self._compile_goals(inst.white_goals),
        }
        self.initial = self.encode_state(initial_state(inst))

    def _compile_moves(self, actions: tuple[ActionDef, ...]) -> tuple[GroundedMove, ...]:
        m, n = self.m, self.n
        out: list[GroundedMove] = []
        for a_idx, act in enumerate(actions):
            for sc in act.eff:
                if sc.negated:
                    raise ModelError(
                        f"action {act.name!r} has negated effect literal "
                        f"{sc.render()}; functional application is undefined"
                    )
            for i, j in action_bounds(act, m, n).positions():
                pre = _compile_pattern(act.pre, i, j, m, n)
                if pre is None:
                    continue  # precondition can never hold at this anchor
                pre_mask, pre_val, pre_negs = pre
                assigned: dict[int, int] = {}
                contradictory = False
                for sc in act.eff:
                    ci = sc.x.substitute(i, m)
                    cj = sc.y.substitute(j, n)
                    shift = 2 * ((cj - 1) * m + (ci - 1))
                    cell = _CELL_OF_PRED[sc.pred]
                    if assigned.get(shift, cell) != cell:
                        contradictory = True
                    assigned[shift] = cell
                if contradictory:
                    continue  # no successor state can satisfy the effect
                eff_mask = 0
                eff_val = 0
                for shift, cell in assigned.items():
                    eff_mask |= 3 << shift
                    eff_val |= cell << shift
                out.append(
                    GroundedMove(a_idx, i, j, pre_mask, pre_val, pre_negs, eff_mask, eff_val)
                )
        return tuple(out)

    def _compile_goals(
        self, goals: tuple[Condition, ...]
    ) -> tuple[tuple[int, int, tuple], ...]:
        patterns = []
        for cond in goals:
            for i, j in bounds_of_condition(cond, self.m, self.n).positions():
                pattern = _compile_pattern(cond, i, j, self.m, self.n)
                if pattern is not None:
                    patterns.append(pattern)
        return tuple(patterns)

    # -- state conversions ------------------------------------------------

    def encode_state(self, state: BoardState) -> int:
        packed = 0
        for idx, pred in enumerate(state.cells):
            packed |= _CELL_OF_PRED[pred] << (2 * idx)
        return packed

    def decode_state(self, packed: int) -> BoardState:
        cells = tuple(
            _PRED_OF_CELL[(packed >> (2 * idx)) & 3] for idx in range(self.m * self.n)
        )
        return BoardState(self.m, self.n, cells)

    # -- fast operations on packed states ----------------------------------

    def move_is_legal(self, packed: int, mv: GroundedMove) -> bool:
        if packed & mv.pre_mask != mv.pre_val:
            return False
        for shift, cell in mv.pre_negs:
            if (packed >> shift) & 3 == cell:
                return False
        return True

    def successors(self, packed: int, side: Side) -> list[tuple[GroundedMove, int]]:
        out = []
        for mv in self.moves[side]:
            if self.move_is_legal(packed, mv):
                out.append((mv, (packed & ~mv.eff_mask) | mv.eff_val))
        return out

    def has_move(self, packed: int, side: Side) -> bool:
        for mv in self.moves[side]:
            if self.move_is_legal(packed, mv):
                return True
        return False

    def won(self, packed: int, side: Side) -> bool:
        for mask, val, negs in self.goal_patterns[side]:
            if packed & mask != val:
                continue
            if all((packed >> shift) & 3 != cell for shift, cell in negs):
                return True
        return False


@lru_cache(maxsize=64)
def _grounded(dom: GameDomain, inst: GameInstance) -> GroundedGame:
    return GroundedGame(dom, inst)


def grounded(dom: GameDomain, inst: GameInstance) -> GroundedGame:
    """Cached grounded form of a domain/instance pair."""
    return _grounded(dom, inst)


def legal_moves(
    dom: GameDomain, state: BoardState, side: Side
) -> list[tuple[Move, BoardState]]:
    """All legal (move, successor) pairs for one side, in declaration order.

    The successor assigns each positive effect literal's predicate to its
    substituted cell and copies every other cell unchanged.
    """
    inst = GameInstance(state.m, state.n, (), (), (), 1)
    game = grounded(dom, inst)
    packed = game.encode_state(state)
    out = []
    for mv, succ in game.successors(packed, side):
        out.append((Move(side, mv.action_index, mv.i, mv.j), game.decode_state(succ)))
    return out

"""Typed syntax objects for BDDL domains and problems, plus implicit bounds.

Coordinates are 1-based: a board of size (m, n) has valid indices
[1..m] x [1..n].  Conditions are conjunctions of sub-conditions written
relative to an anchor position (?x, ?y); the implicit bounds of a condition
are the anchor positions for which every mentioned cell stays on the board.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator


class Pred(Enum):
    """The three cell predicates.  Values double as the concrete syntax."""

    BLACK = "black"
    WHITE = "white"
    OPEN = "open"

    def __str__(self) -> str:
        return self.value


class Axis(Enum):
    X = "x"
    Y = "y"


class CoordKind(Enum):
    VAR = "var"      # ?x or ?y, with an optional signed offset
    CONST = "const"  # absolute 1-based index
    MIN = "min"      # xmin / ymin
    MAX = "max"      # xmax / ymax


@dataclass(frozen=True)
class CoordExpr:
    """One coordinate expression, e.g. ``?x+2``, ``3``, or ``ymax``."""

    axis: Axis
    kind: CoordKind
    value: int = 0   # const value, only meaningful for CONST
    offset: int = 0  # only nonzero for VAR

    def __post_init__(self) -> None:
        if self.kind is not CoordKind.VAR and self.offset != 0:
            raise ValueError("offset only allowed on ?x / ?y expressions")
        if self.kind is CoordKind.CONST and self.value < 1:
            raise ValueError("absolute board indices are 1-based")

    @property
    def lower_slack(self) -> int:
        """How far the anchor must stay above 1 (the 'a' of ?x-a)."""
        return -self.offset if self.kind is CoordKind.VAR and self.offset < 0 else 0

    @property
    def upper_slack(self) -> int:
        """How far the anchor must stay below the board edge (the 'a' of ?x+a)."""
        return self.offset if self.kind is CoordKind.VAR and self.offset > 0 else 0

    def substitute(self, anchor: int, board_max: int) -> int:
        """Value of the expression with ?x/?y := anchor on an axis of size board_max."""
        if self.kind is CoordKind.VAR:
            return anchor + self.offset
        if self.kind is CoordKind.CONST:
            return self.value
        if self.kind is CoordKind.MIN:
            return 1
        return board_max

    def render(self) -> str:
        if self.kind is CoordKind.VAR:
            var = "?x" if self.axis is Axis.X else "?y"
            if self.offset > 0:
                return f"{var}+{self.offset}"
            if self.offset < 0:
                return f"{var}-{-self.offset}"
            return var
        if self.kind is CoordKind.CONST:
            return str(self.value)
        word = self.kind.value  # "min" / "max"
        return ("x" if self.axis is Axis.X else "y") + word


def var_x(offset: int = 0) -> CoordExpr:
    return CoordExpr(Axis.X, CoordKind.VAR, offset=offset)


def var_y(offset: int = 0) -> CoordExpr:
    return CoordExpr(Axis.Y, CoordKind.VAR, offset=offset)


@dataclass(frozen=True)
class SubCondition:
    """A single predicate literal ``p(e1,e2)`` or ``NOT(p(e1,e2))``."""

    pred: Pred
    x: CoordExpr
    y: CoordExpr
    negated: bool = False

    def render(self) -> str:
        body = f"{self.pred}({self.x.render()},{self.y.render()})"
        return f"NOT({body})" if self.negated else body


@dataclass(frozen=True)
class Condition:
    """An ordered conjunction of sub-conditions; () is trivially true."""

    subs: tuple[SubCondition, ...] = ()

    def __iter__(self) -> Iterator[SubCondition]:
        return iter(self.subs)

    def __len__(self) -> int:
        return len(self.subs)

    def render(self) -> str:
        return "(" + " ".join(sc.render() for sc in self.subs) + ")"


@dataclass(frozen=True)
class ActionDef:
    name: str
    pre: Condition
    eff: Condition

    def all_subconditions(self) -> tuple[SubCondition, ...]:
        return self.pre.subs + self.eff.subs

    def render(self) -> str:
        return (
            f":action {self.name}\n"
            f":parameters (?x,?y)\n"
            f":precondition {self.pre.render()}\n"
            f":effect {self.eff.render()}\n"
        )


@dataclass(frozen=True)
class GameDomain:
    black_actions: tuple[ActionDef, ...]
    white_actions: tuple[ActionDef, ...]

    def actions(self, side_black: bool) -> tuple[ActionDef, ...]:
        return self.black_actions if side_black else self.white_actions

    def render(self) -> str:
        parts = ["#blackactions\n"]
        parts += [a.render() for a in self.black_actions]
        parts.append("#whiteactions\n")
        parts += [a.render() for a in self.white_actions]
        return "".join(parts)


@dataclass(frozen=True)
class GameInstance:
    m: int                                   # board width
    n: int                                   # board height
    init: tuple[tuple[Pred, int, int], ...]  # (pred, i, j), pred in {BLACK, WHITE}
    black_goals: tuple[Condition, ...]
    white_goals: tuple[Condition, ...]
    depth: int

    def goals(self, side_black: bool) -> tuple[Condition, ...]:
        return self.black_goals if side_black else self.white_goals

    def render(self) -> str:
        init_body = "".join(f"{p}({i},{j})" for p, i, j in self.init)
        parts = [
            f"#boardsize {self.m} {self.n}\n",
            f"#init\n({init_body})\n",
            f"#depth {self.depth}\n",
            "#blackgoals\n",
        ]
        parts += [c.render() + "\n" for c in self.black_goals]
        parts.append("#whitegoals\n")
        parts += [c.render() + "\n" for c in self.white_goals]
        return "".join(parts)


@dataclass(frozen=True)
class Bounds:
    """An inclusive interval [lx..ux] x [ly..uy] of anchor positions.

    Empty intervals (lx > ux or ly > uy) are legal values and must be checked
    by callers via :meth:`is_empty`, never silently iterated as nonempty.
    """

    lx: int
    ux: int
    ly: int
    uy: int

    @property
    def is_empty(self) -> bool:
        return self.lx > self.ux or self.ly > self.uy

    def contains(self, i: int, j: int) -> bool:
        return self.lx <= i <= self.ux and self.ly <= j <= self.uy

    def intersect(self, other: "Bounds") -> "Bounds":
        return Bounds(
            max(self.lx, other.lx),
            min(self.ux, other.ux),
            max(self.ly, other.ly),
            min(self.uy, other.uy),
        )

    def positions(self) -> Iterator[tuple[int, int]]:
        for j in range(self.ly, self.uy + 1):
            for i in range(self.lx, self.ux + 1):
                yield i, j

    @staticmethod
    def full_board(m: int, n: int) -> "Bounds":
        return Bounds(1, m, 1, n)


def bounds_of_subcondition(sub: SubCondition, m: int, n: int) -> Bounds:
    """Anchor positions for which both coordinates of the literal stay on-board.

    Negation does not change bounds; const/min/max expressions contribute no
    slack in either direction.
    """
    return Bounds(
        1 + sub.x.lower_slack,
        m - sub.x.upper_slack,
        1 + sub.y.lower_slack,
        n - sub.y.upper_slack,
    )


def bounds_of_condition(cond: Condition, m: int, n: int) -> Bounds:
    """Intersection of the sub-condition bounds; () yields the full board."""
    acc = Bounds.full_board(m, n)
    for sub in cond:
        acc = acc.intersect(bounds_of_subcondition(sub, m, n))
    return acc


def action_bounds(action: ActionDef, m: int, n: int) -> Bounds:
    """Joint legal anchors of an action: bounds(pre) intersected with bounds(eff)."""
    return bounds_of_condition(action.pre, m, n).intersect(
        bounds_of_condition(action.eff, m, n)
    )

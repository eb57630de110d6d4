"""Bounded game search deciding whether Black forces a win within d plies.

Black moves at odd plies, White at even plies.  After a Black move the black
goals are checked, after a White move the white goals; a side with no legal
move at its turn has lost.  If the depth budget runs out without a Black win,
Black has not won.  Results are memoized on (state, plies remaining, side to
move) and independent of exploration order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .semantics import BoardState, GroundedGame, Move, Side, grounded
from .syntax import GameDomain, GameInstance


class NotWinningError(Exception):
    """Raised when a strategy move is requested from a non-winning position."""


@dataclass(frozen=True)
class OracleResult:
    black_wins: bool
    principal_move: Move | None
    nodes_expanded: int


def _center_order(moves, m: int, n: int):
    """Indices of moves sorted center-first; helps the search find wins early."""
    cx, cy = (m + 1) / 2, (n + 1) / 2
    return sorted(
        range(len(moves)),
        key=lambda k: abs(moves[k].i - cx) + abs(moves[k].j - cy),
    )


class Oracle:
    """Reusable search over one domain/instance pair; memo persists."""

    def __init__(self, dom: GameDomain, inst: GameInstance):
        self.game: GroundedGame = grounded(dom, inst)
        self.inst = inst
        self._memo: dict[int, bool] = {}
        self._nodes = 0
        # composite int keys: (state << shift) | (plies << 1) | black_bit
        self._kshift = max(inst.depth, 1).bit_length() + 1
        self._border = _center_order(self.game.moves[Side.BLACK], inst.m, inst.n)
        self._worder = _center_order(self.game.moves[Side.WHITE], inst.m, inst.n)

    @property
    def nodes_expanded(self) -> int:
        return self._nodes

    def black_wins_within(self, packed: int, plies: int, side: Side) -> bool:
        if plies <= 0:
            return False
        return self._win(packed, plies, side is Side.BLACK)

    def _win(self, s: int, k: int, black_to_move: bool) -> bool:
        key = ((s << self._kshift) | (k << 1)) | black_to_move
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        self._nodes += 1
        game = self.game
        if black_to_move:
            moves = game.moves[Side.BLACK]
            order = self._border
            result = False
            for idx in order:
                mv = moves[idx]
                if s & mv.pre_mask != mv.pre_val:
                    continue
                if any((s >> sh) & 3 == c for sh, c in mv.pre_negs):
                    continue
                s2 = (s & ~mv.eff_mask) | mv.eff_val
                if game.won(s2, Side.BLACK):
                    result = True
                    break
                if k > 1 and self._win(s2, k - 1, False):
                    result = True
                    break
            # no legal move at all also lands here: Black is stuck and loses
        else:
            moves = game.moves[Side.WHITE]
            order = self._worder
            result = True
            for idx in order:
                mv = moves[idx]
                if s & mv.pre_mask != mv.pre_val:
                    continue
                if any((s >> sh) & 3 == c for sh, c in mv.pre_negs):
                    continue
                s2 = (s & ~mv.eff_mask) | mv.eff_val
                if game.won(s2, Side.WHITE):
                    result = False
                    break
                if k == 1 or not self._win(s2, k - 1, True):
                    result = False
                    break
            # White stuck leaves result True: a player who cannot move has lost
        self._memo[key] = result
        return result

    def solve(self) -> OracleResult:
        wins = self.black_wins_within(self.game.initial, self.inst.depth, Side.BLACK)
        principal = None
        if wins:
            principal = self._pick_move(self.game.initial, self.inst.depth)
        return OracleResult(wins, principal, self._nodes)

    def _pick_move(self, packed: int, plies: int) -> Move:
        """Lowest (action index, i, j) Black move preserving the win."""
        game = self.game
        for mv in game.moves[Side.BLACK]:  # declaration order == tie-break order
            if not game.move_is_legal(packed, mv):
                continue
            s2 = (packed & ~mv.eff_mask) | mv.eff_val
            if game.won(s2, Side.BLACK):
                return Move(Side.BLACK, mv.action_index, mv.i, mv.j)
            if plies > 1 and self._win(s2, plies - 1, False):
                return Move(Side.BLACK, mv.action_index, mv.i, mv.j)
        raise NotWinningError("no win-preserving move exists")

    def strategy_move(self, state: BoardState, plies_remaining: int) -> Move:
        packed = self.game.encode_state(state)
        if not self.black_wins_within(packed, plies_remaining, Side.BLACK):
            raise NotWinningError(
                f"position is not winning for Black within {plies_remaining} plies"
            )
        return self._pick_move(packed, plies_remaining)


def solve(dom: GameDomain, inst: GameInstance) -> OracleResult:
    """Decide WIN_d membership of the initial state and extract a first move."""
    return Oracle(dom, inst).solve()


def strategy_move(
    dom: GameDomain, inst: GameInstance, state: BoardState, plies_remaining: int
) -> Move:
    """A win-preserving Black move; raises NotWinningError on caller misuse."""
    return Oracle(dom, inst).strategy_move(state, plies_remaining)


# -- sanity conditions --------------------------------------------------------


@dataclass
class SanityReport:
    status: str  # "pass" | "violation" | "budget-exhausted"
    violations: list[str] = field(default_factory=list)
    nodes_visited: int = 0

    @property
    def ok(self) -> bool:
        return self.status == "pass"


def check_sanity(dom: GameDomain, inst: GameInstance, budget: int = 200_000) -> SanityReport:
    """Check the sanity conditions over play-reachable states.

    Verifies that the initial state is won by nobody and that, along every
    transition reachable within the instance depth, a Black move never makes
    the white goal newly true and a White move never makes the black goal
    newly true.  Exploration is breadth-first and stops at the node budget.
    """
    game = grounded(dom, inst)
    report = SanityReport("pass")
    s0 = game.initial
    if game.won(s0, Side.BLACK):
        report.violations.append("initial state already satisfies a black goal")
    if game.won(s0, Side.WHITE):
        report.violations.append("initial state already satisfies a white goal")
    if report.violations:
        report.status = "violation"
        return report

    won_memo: dict[tuple[int, Side], bool] = {}

    def won(state: int, side: Side) -> bool:
        key = (state, side)
        hit = won_memo.get(key)
        if hit is None:
            hit = won_memo[key] = game.won(state, side)
        return hit

    seen = {(s0, Side.BLACK)}
    queue: deque[tuple[int, Side, int]] = deque([(s0, Side.BLACK, 0)])
    while queue:
        s, side, depth = queue.popleft()
        report.nodes_visited += 1
        if report.nodes_visited > budget:
            report.status = "budget-exhausted"
            return report
        if depth >= inst.depth:
            continue
        other = side.other
        goal_side = other  # the side whose goal this mover must not establish
        for mv, s2 in game.successors(s, side):
            if won(s2, goal_side) and not won(s, goal_side):
                report.violations.append(
                    f"{side.value} move (action {mv.action_index} at ({mv.i},{mv.j})) "
                    f"makes the {goal_side.value} goal newly true"
                )
                report.status = "violation"
                return report
            if (s2, other) not in seen:
                seen.add((s2, other))
                queue.append((s2, other, depth + 1))
    return report

"""Compile a domain/instance pair into a circuit asserting that Black has a
winning strategy of depth at most d.

The quantifier prefix interleaves existential Black moves with universal
White moves (plus existential indicator bits recording whether White's
universally-chosen move was legal), followed by one shared goal block per
player, a universal symbolic board position, and per-step state bits that
describe that single position's trajectory.  All conditions are written once
against the symbolic position, so the encoding grows linearly in the depth
and in the model size.

Conventions: action, goal, and counter-example indices are 0-based in
declaration order; position words carry 1-based board coordinates directly;
no game-stop bit is allocated at the terminal step.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circuit import BitVec, Circuit, compute, equality, less_than
from .parser import validate_instance
from .semantics import Side
from .syntax import (
    ActionDef,
    Axis,
    Bounds,
    Condition,
    GameDomain,
    GameInstance,
    SubCondition,
    action_bounds,
    bounds_of_condition,
)


class EncodingError(Exception):
    pass


def bits_for_count(count: int) -> int:
    """ceil(log2(count)) bits to index `count` alternatives (0 for count <= 1)."""
    return (count - 1).bit_length() if count > 1 else 0


def bits_for_coord(board_max: int) -> int:
    """ceil(log2(board_max + 1)) bits for a 1-based coordinate."""
    return board_max.bit_length()


@dataclass(frozen=True)
class StepVars:
    step: int
    side: Side
    action: tuple[int, ...]
    x: tuple[int, ...]
    y: tuple[int, ...]
    gamestop: int | None
    legal: int | None = None          # white steps only
    preflags: tuple[int, ...] = ()    # white steps only, padded to pmax


@dataclass(frozen=True)
class VarLayout:
    steps: tuple[StepVars, ...]
    bx: tuple[int, ...]
    by: tuple[int, ...]
    bc: tuple[int, ...]
    wx: tuple[int, ...]
    wy: tuple[int, ...]
    wc: tuple[int, ...]
    wce: tuple[int, ...]
    sx: tuple[int, ...]
    sy: tuple[int, ...]
    states: tuple[tuple[int, int], ...]  # (open, white) bits for time 1..d+1


@dataclass(frozen=True)
class EncodeMeta:
    m: int
    n: int
    depth: int
    black_action_names: tuple[str, ...]
    white_action_names: tuple[str, ...]
    pmax: int


@dataclass(frozen=True)
class EncodedInstance:
    circuit: Circuit
    layout: VarLayout
    meta: EncodeMeta


class Encoder:
    def __init__(self, dom: GameDomain, inst: GameInstance):
        errors = [d for d in validate_instance(dom, inst) if d.level == "error"]
        if errors:
            raise EncodingError("; ".join(str(d) for d in errors))
        self.dom = dom
        self.inst = inst
        self.m, self.n, self.d = inst.m, inst.n, inst.depth
        self.circ = Circuit()
        self.xw = bits_for_coord(self.m)
        self.yw = bits_for_coord(self.n)
        self.pmax = max((len(a.pre) for a in dom.white_actions), default=0)
        self.layout = self._allocate()
        c = self.circ
        self._sx = c.input_bitvec(self.layout.sx)
        self._sy = c.input_bitvec(self.layout.sy)
        self._black_core: int | None = None
        self._white_core: int | None = None

    # -- prefix allocation ---------------------------------------------------

    def _allocate(self) -> VarLayout:
        c = self.circ
        d = self.d
        steps: list[StepVars] = []
        for i in range(1, d + 1):
            side = Side.BLACK if i % 2 == 1 else Side.WHITE
            acount = len(self.dom.actions(side is Side.BLACK))
            aw = bits_for_count(acount)
            has_stop = i < d
            width = aw + self.xw + self.yw + (1 if has_stop else 0)
            name = f"{side.value}-move-{i}"
            ids = c.exists(width, name) if side is Side.BLACK else c.forall(width, name)
            pos = 0
            action = tuple(ids[pos : pos + aw]); pos += aw
            x = tuple(ids[pos : pos + self.xw]); pos += self.xw
            y = tuple(ids[pos : pos + self.yw]); pos += self.yw
            gamestop = ids[pos] if has_stop else None
            legal = None
            preflags: tuple[int, ...] = ()
            if side is Side.WHITE:
                ind = c.exists(1 + self.pmax, f"white-indicators-{i}")
                legal = ind[0]
                preflags = tuple(ind[1:])
            steps.append(StepVars(i, side, action, x, y, gamestop, legal, preflags))

        bw = bits_for_count(len(self.inst.black_goals))
        bg = c.exists(self.xw + self.yw + bw, "black-goal")
        bx, by, bc = tuple(bg[: self.xw]), tuple(bg[self.xw : self.xw + self.yw]), tuple(bg[self.xw + self.yw :])

        ww = bits_for_count(len(self.inst.white_goals))
        wg = c.forall(self.xw + self.yw + ww, "white-goal")
        wx, wy, wc = tuple(wg[: self.xw]), tuple(wg[self.xw : self.xw + self.yw]), tuple(wg[self.xw + self.yw :])

        cemax = max((len(cond) for cond in self.inst.white_goals), default=0)
        wce = tuple(c.exists(bits_for_count(cemax), "white-goal-counterexample"))

        sym = c.forall(self.xw + self.yw, "symbolic-position")
        sx, sy = tuple(sym[: self.xw]), tuple(sym[self.xw :])

        st = c.exists(2 * (d + 1), "states")
        states = tuple((st[2 * t], st[2 * t + 1]) for t in range(d + 1))
        return VarLayout(tuple(steps), bx, by, bc, wx, wy, wc, wce, sx, sy, states)

    # -- per-step accessors ----------------------------------------------------

    def _state(self, t: int) -> tuple[int, int]:
        """(open, white) literal refs for time step t (1-based)."""
        o, w = self.layout.states[t - 1]
        return self.circ.var(o), self.circ.var(w)

    def _step(self, i: int) -> StepVars:
        return self.layout.steps[i - 1]

    def _move_words(self, i: int) -> tuple[BitVec, BitVec, BitVec]:
        sv = self._step(i)
        c = self.circ
        return c.input_bitvec(sv.action), c.input_bitvec(sv.x), c.input_bitvec(sv.y)

    # -- auxiliary circuits -------------------------------------------------

    def build_symbimp(self, vx: BitVec, vy: BitVec, sub: SubCondition) -> int:
        """True iff the literal's cell, relative to (vx, vy), is the symbolic one."""
        c = self.circ
        return c.and_(
            equality(c, compute(c, vx, sub.x, self.m, Axis.X), self._sx),
            equality(c, compute(c, vy, sub.y, self.n, Axis.Y), self._sy),
        )

    def build_subcon(self, sub: SubCondition, o: int, w: int) -> int:
        c = self.circ
        if sub.pred.value == "black":
            gate = c.and_(-o, -w)
        elif sub.pred.value == "white":
            gate = c.and_(-o, w)
        else:
            gate = o
        return -gate if sub.negated else gate

    def build_bound(self, vx: BitVec, vy: BitVec, cond_or_bounds: Condition | Bounds) -> int:
        """All four interval comparators on an anchor word pair."""
        c = self.circ
        b = cond_or_bounds
        if isinstance(b, Condition):
            b = bounds_of_condition(b, self.m, self.n)
        if b.is_empty:
            return c.false()
        return c.and_(
            -less_than(c, vx, b.lx),
            less_than(c, vx, b.ux + 1),
            -less_than(c, vy, b.ly),
            less_than(c, vy, b.uy + 1),
        )

    # -- initial state ------------------------------------------------------

    def build_initial(self) -> int:
        c = self.circ
        o1, w1 = self._state(1)
        black_hits = []
        white_hits = []
        for pred, i, j in self.inst.init:
            hit = c.and_(equality(c, self._sx, i), equality(c, self._sy, j))
            (black_hits if pred.value == "black" else white_hits).append(hit)
        any_hit = c.any_(black_hits + white_hits)
        return c.and_(
            c.implies(c.any_(black_hits), c.and_(-o1, -w1)),
            c.implies(c.any_(white_hits), c.and_(-o1, w1)),
            c.implies(-any_hit, o1),
        )

    # -- moves ----------------------------------------------------------------

    def build_black_move(self, i: int) -> int:
        c = self.circ
        avec, xvec, yvec = self._move_words(i)
        o_i, w_i = self._state(i)
        o_n, w_n = self._state(i + 1)
        actions = self.dom.black_actions
        parts = [less_than(c, avec, len(actions))]
        for j, act in enumerate(actions):
            sel = equality(c, avec, j)
            bounds = action_bounds(act, self.m, self.n)
            if bounds.is_empty:
                parts.append(c.implies(sel, c.false()))
                continue
            payload = [self.build_bound(xvec, yvec, bounds)]
            for sub in act.pre:
                payload.append(
                    c.implies(self.build_symbimp(xvec, yvec, sub), self.build_subcon(sub, o_i, w_i))
                )
            hits = [self.build_symbimp(xvec, yvec, sub) for sub in act.eff]
            for sub, hit in zip(act.eff, hits):
                payload.append(c.implies(hit, self.build_subcon(sub, o_n, w_n)))
            payload.append(
                c.implies(-c.any_(hits), c.and_(c.iff(o_i, o_n), c.iff(w_i, w_n)))
            )
            parts.append(c.implies(sel, c.all_(payload)))
        return c.all_(parts)

    def _legal_and_flags(self, i: int) -> int:
        sv = self._step(i)
        c = self.circ
        return c.all_([c.var(sv.legal)] + [c.var(p) for p in sv.preflags])

    def _effects_consistent(self, xvec: BitVec, yvec: BitVec, act: ActionDef) -> int:
        """True iff no two positive effect literals with different predicates
        land on the same cell.  A move whose effects contradict has no
        successor state at all, so White choosing one must count as illegal
        rather than as a play that falsifies the matrix.  For actions whose
        effect cells can never coincide this folds to constant true.
        """
        c = self.circ
        effs = [sub for sub in act.eff if not sub.negated]
        parts = []
        for k in range(len(effs)):
            for l in range(k + 1, len(effs)):
                if effs[k].pred is effs[l].pred:
                    continue
                same_cell = c.and_(
                    equality(
                        c,
                        compute(c, xvec, effs[k].x, self.m, Axis.X),
                        compute(c, xvec, effs[l].x, self.m, Axis.X),
                    ),
                    equality(
                        c,
                        compute(c, yvec, effs[k].y, self.n, Axis.Y),
                        compute(c, yvec, effs[l].y, self.n, Axis.Y),
                    ),
                )
                parts.append(-same_cell)
        return c.all_(parts)

    def build_white_move(self, i: int) -> int:
        c = self.circ
        sv = self._step(i)
        avec, xvec, yvec = self._move_words(i)
        o_i, w_i = self._state(i)
        o_n, w_n = self._state(i + 1)
        actions = self.dom.white_actions
        legal = c.var(sv.legal)

        bound_impls = []
        for j, act in enumerate(actions):
            bounds = action_bounds(act, self.m, self.n)
            well_formed = self.build_bound(xvec, yvec, bounds)
            if not bounds.is_empty:
                well_formed = c.and_(well_formed, self._effects_consistent(xvec, yvec, act))
            bound_impls.append(c.implies(equality(c, avec, j), well_formed))
        rhs = c.and_(c.all_(bound_impls), less_than(c, avec, len(actions)))
        parts = [c.iff(rhs, legal)]

        legal_all = self._legal_and_flags(i)
        for j, act in enumerate(actions):
            if action_bounds(act, self.m, self.n).is_empty:
                continue  # never legal: the bound row above already forces legal=0
            sel = equality(c, avec, j)
            payload = []
            for k, sub in enumerate(act.pre):
                payload.append(
                    c.implies(
                        self.build_symbimp(xvec, yvec, sub),
                        c.iff(self.build_subcon(sub, o_i, w_i), c.var(sv.preflags[k])),
                    )
                )
            for k in range(len(act.pre), self.pmax):
                payload.append(c.var(sv.preflags[k]))  # pad surplus flags true
            hits = [self.build_symbimp(xvec, yvec, sub) for sub in act.eff]
            eff_part = [
                c.implies(hit, self.build_subcon(sub, o_n, w_n))
                for sub, hit in zip(act.eff, hits)
            ]
            eff_part.append(
                c.implies(-c.any_(hits), c.and_(c.iff(o_i, o_n), c.iff(w_i, w_n)))
            )
            payload.append(c.implies(legal_all, c.all_(eff_part)))
            parts.append(c.implies(sel, c.all_(payload)))
        return c.all_(parts)

    # -- goals -------------------------------------------------------------------

    def _black_goal_core(self) -> int:
        if self._black_core is not None:
            return self._black_core
        c = self.circ
        bxv = c.input_bitvec(self.layout.bx)
        byv = c.input_bitvec(self.layout.by)
        bcv = c.input_bitvec(self.layout.bc)
        o_last, w_last = self._state(self.d + 1)
        parts = [less_than(c, bcv, len(self.inst.black_goals))]
        for j, cond in enumerate(self.inst.black_goals):
            sel = equality(c, bcv, j)
            bounds = bounds_of_condition(cond, self.m, self.n)
            if bounds.is_empty:
                parts.append(c.implies(sel, c.false()))
                continue
            payload = [self.build_bound(bxv, byv, bounds)]
            for sub in cond:
                payload.append(
                    c.implies(self.build_symbimp(bxv, byv, sub), self.build_subcon(sub, o_last, w_last))
                )
            parts.append(c.implies(sel, c.all_(payload)))
        self._black_core = c.all_(parts)
        return self._black_core

    def _white_goal_core(self) -> int:
        if self._white_core is not None:
            return self._white_core
        c = self.circ
        wxv = c.input_bitvec(self.layout.wx)
        wyv = c.input_bitvec(self.layout.wy)
        wcv = c.input_bitvec(self.layout.wc)
        wcev = c.input_bitvec(self.layout.wce)
        o_last, w_last = self._state(self.d + 1)
        parts = []
        for j, cond in enumerate(self.inst.white_goals):
            bounds = bounds_of_condition(cond, self.m, self.n)
            if bounds.is_empty:
                continue  # the anchor test is constant false: vacuous conjunct
            sel = c.and_(equality(c, wcv, j), self.build_bound(wxv, wyv, bounds))
            payload = [less_than(c, wcev, len(cond))]
            for k, sub in enumerate(cond):
                payload.append(
                    c.implies(
                        c.and_(self.build_symbimp(wxv, wyv, sub), equality(c, wcev, k)),
                        -self.build_subcon(sub, o_last, w_last),
                    )
                )
            parts.append(c.implies(sel, c.all_(payload)))
        self._white_core = c.all_(parts)
        return self._white_core

    def _state_copy(self, i: int) -> int:
        c = self.circ
        o_i, w_i = self._state(i)
        o_last, w_last = self._state(self.d + 1)
        return c.and_(c.iff(o_i, o_last), c.iff(w_i, w_last))

    def build_black_goal(self, i: int) -> int:
        """Black's goal checked at time i via state propagation to d+1."""
        if i == self.d + 1:
            return self._black_goal_core()
        return self.circ.and_(self._state_copy(i), self._black_goal_core())

    def build_white_goal(self, i: int) -> int:
        """Absence of White's goal at time i: some sub-condition of every
        anchored white goal is violated (the counter-example index)."""
        if i == self.d + 1:
            return self._white_goal_core()
        return self.circ.and_(self._state_copy(i), self._white_goal_core())

    # -- matrix --------------------------------------------------------------------

    def build_matrix(self) -> int:
        c = self.circ
        node: int | None = None
        for i in range(self.d, 0, -1):
            sv = self._step(i)
            if sv.side is Side.BLACK:
                move = self.build_black_move(i)
                if i == self.d:
                    node = c.and_(move, self.build_black_goal(i + 1))
                else:
                    stop = c.var(sv.gamestop)
                    node = c.and_(
                        move,
                        c.implies(stop, self.build_black_goal(i + 1)),
                        c.implies(-stop, node),
                    )
            else:
                move = self.build_white_move(i)
                legal_all = self._legal_and_flags(i)
                if i == self.d:
                    # even depth: Black's last hope is that every White move
                    # at the final ply is illegal, i.e. White is stuck
                    node = c.and_(move, -legal_all)
                else:
                    stop = c.var(sv.gamestop)
                    node = c.and_(
                        move,
                        c.implies(
                            legal_all,
                            c.and_(
                                c.implies(stop, self.build_white_goal(i + 1)),
                                c.implies(-stop, node),
                            ),
                        ),
                    )
        return c.and_(self.build_initial(), node)


def encode(dom: GameDomain, inst: GameInstance) -> EncodedInstance:
    """Full circuit with the standard prefix order and deterministic numbering."""
    enc = Encoder(dom, inst)
    enc.circ.output = enc.build_matrix()
    meta = EncodeMeta(
        inst.m,
        inst.n,
        inst.depth,
        tuple(a.name for a in dom.black_actions),
        tuple(a.name for a in dom.white_actions),
        enc.pmax,
    )
    return EncodedInstance(enc.circ, enc.layout, meta)

"""Lexer and recursive-descent parser for BDDL domain and problem files.

Whitespace, including newlines, works as a token separator everywhere except
that directive headers (``#boardsize``, ``#blackactions``, ...) must be the
first token on their line.  ``#blackgoal``/``#whitegoal`` are accepted as
synonyms of ``#blackgoals``/``#whitegoals``.  Keywords and predicates are
lowercase; the negation wrapper is the uppercase ``NOT``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    ActionDef,
    Axis,
    Condition,
    CoordExpr,
    CoordKind,
    GameDomain,
    GameInstance,
    Pred,
    SubCondition,
    action_bounds,
    bounds_of_condition,
)


class BddlError(Exception):
    """Base class for all BDDL front-end failures."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class BddlSyntaxError(BddlError):
    pass


class BddlSemanticError(BddlError):
    pass


_PUNCT = {"(": "lparen", ")": "rparen", ",": "comma", "+": "plus", "-": "minus"}


@dataclass(frozen=True)
class Token:
    kind: str  # directive | keyword | word | int | qvar | lparen | rparen | comma | plus | minus | eof
    text: str
    line: int
    col: int


def _lex(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    length = len(text)
    at_line_start = True
    while i < length:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            at_line_start = True
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        start_line, start_col = line, col
        if ch == "#":
            if not at_line_start:
                raise BddlSyntaxError(
                    "directive headers must start a line", start_line, start_col
                )
            j = i + 1
            while j < length and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("directive", text[i:j], start_line, start_col))
            col += j - i
            i = j
        elif ch == ":":
            j = i + 1
            while j < length and (text[j].isalnum() or text[j] == "_" or text[j] == "-"):
                j += 1
            tokens.append(Token("keyword", text[i:j], start_line, start_col))
            col += j - i
            i = j
        elif ch == "?":
            j = i + 1
            while j < length and text[j].isalpha():
                j += 1
            tokens.append(Token("qvar", text[i:j], start_line, start_col))
            col += j - i
            i = j
        elif ch.isdigit():
            j = i
            while j < length and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], start_line, start_col))
            col += j - i
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < length and (text[j].isalnum() or text[j] == "_" or text[j] == "-"):
                j += 1
            tokens.append(Token("word", text[i:j], start_line, start_col))
            col += j - i
            i = j
        elif ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, start_line, start_col))
            i += 1
            col += 1
        else:
            raise BddlSyntaxError(f"unexpected character {ch!r}", start_line, start_col)
        at_line_start = False
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _lex(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def take(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            got = tok.text if tok.text else tok.kind
            raise BddlSyntaxError(f"expected {want}, found {got!r}", tok.line, tok.col)
        return self.take()

    def expect_int(self) -> int:
        tok = self.expect("int")
        return int(tok.text)

    # -- coordinate expressions ------------------------------------------

    def coord_expr(self, axis: Axis, allow_const: bool) -> CoordExpr:
        tok = self.peek()
        if tok.kind == "qvar":
            self.take()
            want = "?x" if axis is Axis.X else "?y"
            if tok.text != want:
                raise BddlSyntaxError(
                    f"expected {want} on this axis, found {tok.text}", tok.line, tok.col
                )
            offset = 0
            nxt = self.peek()
            if nxt.kind in ("plus", "minus"):
                self.take()
                value = self.expect_int()
                offset = value if nxt.kind == "plus" else -value
            return CoordExpr(axis, CoordKind.VAR, offset=offset)
        if tok.kind == "int":
            self.take()
            if not allow_const:
                raise BddlSemanticError(
                    "absolute indices are not allowed in domain conditions",
                    tok.line,
                    tok.col,
                )
            value = int(tok.text)
            if value < 1:
                raise BddlSemanticError("board indices are 1-based", tok.line, tok.col)
            return CoordExpr(axis, CoordKind.CONST, value=value)
        if tok.kind == "word" and tok.text in ("xmin", "xmax", "ymin", "ymax"):
            self.take()
            if tok.text[0] != axis.value:
                raise BddlSemanticError(
                    f"{tok.text} cannot appear on the {axis.value}-axis",
                    tok.line,
                    tok.col,
                )
            kind = CoordKind.MIN if tok.text.endswith("min") else CoordKind.MAX
            return CoordExpr(axis, kind)
        raise BddlSyntaxError(
            f"expected coordinate expression, found {tok.text or tok.kind!r}",
            tok.line,
            tok.col,
        )

    # -- conditions -------------------------------------------------------

    def subcondition(self, allow_const: bool) -> SubCondition:
        tok = self.peek()
        negated = False
        if tok.kind == "word" and tok.text == "NOT":
            self.take()
            self.expect("lparen")
            negated = True
            tok = self.peek()
        if tok.kind != "word" or tok.text not in ("open", "white", "black"):
            raise BddlSyntaxError(
                f"expected predicate open/white/black, found {tok.text or tok.kind!r}",
                tok.line,
                tok.col,
            )
        self.take()
        pred = Pred(tok.text)
        self.expect("lparen")
        e1 = self.coord_expr(Axis.X, allow_const)
        self.expect("comma")
        e2 = self.coord_expr(Axis.Y, allow_const)
        self.expect("rparen")
        if negated:
            self.expect("rparen")
        return SubCondition(pred, e1, e2, negated)

    def condition(self, allow_const: bool) -> Condition:
        self.expect("lparen")
        subs: list[SubCondition] = []
        while self.peek().kind != "rparen":
            subs.append(self.subcondition(allow_const))
        self.take()
        return Condition(tuple(subs))

    def condition_list(self, allow_const: bool) -> tuple[Condition, ...]:
        conds: list[Condition] = []
        while self.peek().kind == "lparen":
            conds.append(self.condition(allow_const))
        return tuple(conds)

    # -- domain files -----------------------------------------------------

    def action(self) -> ActionDef:
        self.expect("keyword", ":action")
        name_tok = self.peek()
        if name_tok.kind not in ("word", "int"):
            raise BddlSyntaxError(
                f"expected action name, found {name_tok.text or name_tok.kind!r}",
                name_tok.line,
                name_tok.col,
            )
        self.take()
        self.expect("keyword", ":parameters")
        self.expect("lparen")
        tok = self.expect("qvar")
        if tok.text != "?x":
            raise BddlSyntaxError("parameters must be exactly (?x,?y)", tok.line, tok.col)
        self.expect("comma")
        tok = self.expect("qvar")
        if tok.text != "?y":
            raise BddlSyntaxError("parameters must be exactly (?x,?y)", tok.line, tok.col)
        self.expect("rparen")
        self.expect("keyword", ":precondition")
        pre = self.condition(allow_const=False)
        self.expect("keyword", ":effect")
        eff = self.condition(allow_const=False)
        return ActionDef(name_tok.text, pre, eff)

    def action_list(self) -> list[ActionDef]:
        actions: list[ActionDef] = []
        while self.peek().kind == "keyword" and self.peek().text == ":action":
            actions.append(self.action())
        return actions

    def domain(self) -> GameDomain:
        header = self.expect("directive", "#blackactions")
        black = self.action_list()
        if not black:
            raise BddlSemanticError("no black actions defined", header.line, header.col)
        header = self.expect("directive", "#whiteactions")
        white = self.action_list()
        if not white:
            raise BddlSemanticError("no white actions defined", header.line, header.col)
        self.expect("eof")
        for side, actions in (("black", black), ("white", white)):
            seen: set[str] = set()
            for act in actions:
                if act.name in seen:
                    raise BddlSemanticError(
                        f"duplicate {side} action name {act.name!r}", header.line, header.col
                    )
                seen.add(act.name)
        return GameDomain(tuple(black), tuple(white))

    # -- problem files ----------------------------------------------------

    def init_entries(self, m: int, n: int) -> tuple[tuple[Pred, int, int], ...]:
        entries: list[tuple[Pred, int, int]] = []
        if self.peek().kind != "lparen":
            return ()  # bare "#init" with no list means the empty board
        self.take()
        seen: set[tuple[int, int]] = set()
        while self.peek().kind != "rparen":
            tok = self.peek()
            if tok.kind != "word" or tok.text not in ("black", "white", "open"):
                raise BddlSyntaxError(
                    f"expected init entry, found {tok.text or tok.kind!r}",
                    tok.line,
                    tok.col,
                )
            self.take()
            if tok.text == "open":
                raise BddlSemanticError(
                    "init entries must be black or white; open is implicit",
                    tok.line,
                    tok.col,
                )
            self.expect("lparen")
            i = self.expect_int()
            self.expect("comma")
            j = self.expect_int()
            self.expect("rparen")
            if not (1 <= i <= m and 1 <= j <= n):
                raise BddlSemanticError(
                    f"init position ({i},{j}) outside the {m}x{n} board",
                    tok.line,
                    tok.col,
                )
            if (i, j) in seen:
                raise BddlSemanticError(
                    f"init position ({i},{j}) listed twice", tok.line, tok.col
                )
            seen.add((i, j))
            entries.append((Pred(tok.text), i, j))
        self.take()
        return tuple(entries)

    def goal_header(self, base: str) -> None:
        tok = self.peek()
        if tok.kind == "directive" and tok.text in (base, base + "s"):
            self.take()
            return
        raise BddlSyntaxError(
            f"expected {base}s, found {tok.text or tok.kind!r}", tok.line, tok.col
        )

    def problem(self) -> GameInstance:
        tok = self.expect("directive", "#boardsize")
        m = self.expect_int()
        n = self.expect_int()
        if m < 1 or n < 1:
            raise BddlSemanticError(f"board size {m}x{n} must be positive", tok.line, tok.col)
        self.expect("directive", "#init")
        init = self.init_entries(m, n)
        tok = self.expect("directive", "#depth")
        depth = self.expect_int()
        if depth < 1:
            raise BddlSemanticError(f"depth {depth} must be positive", tok.line, tok.col)
        self.goal_header("#blackgoal")
        black_goals = self.condition_list(allow_const=True)
        self.goal_header("#whitegoal")
        white_goals = self.condition_list(allow_const=True)
        self.expect("eof")
        return GameInstance(m, n, init, black_goals, white_goals, depth)


def parse_domain(text: str) -> GameDomain:
    """Parse a BDDL domain file into a :class:`GameDomain`."""
    return _Parser(text).domain()


def parse_problem(text: str) -> GameInstance:
    """Parse a BDDL problem file into a :class:`GameInstance`."""
    return _Parser(text).problem()


# -- static validation ------------------------------------------------------


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "error" | "warning" | "note"
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.level}: [{self.code}] {self.message}"


def validate_instance(dom: GameDomain, inst: GameInstance) -> list[Diagnostic]:
    """Static checks on a parsed domain/instance pair.

    Returns diagnostics only; nothing here raises.  Errors flag models whose
    game semantics are ill-defined, warnings flag constructs the encoder
    accepts but the oracle (or the model author) should look at.
    """
    out: list[Diagnostic] = []
    m, n = inst.m, inst.n

    for side, actions in (("black", dom.black_actions), ("white", dom.white_actions)):
        for act in actions:
            if action_bounds(act, m, n).is_empty:
                out.append(
                    Diagnostic(
                        "warning",
                        "empty-action-bounds",
                        f"{side} action {act.name!r} has no legal anchor on a {m}x{n} board",
                    )
                )
            negated_effects = [sc for sc in act.eff if sc.negated]
            if negated_effects:
                out.append(
                    Diagnostic(
                        "warning",
                        "negated-effect",
                        f"{side} action {act.name!r} has negated effect literals; "
                        "the encoder treats them as constraints only and the "
                        "oracle rejects them",
                    )
                )
            assigned: dict[tuple[int, int], Pred] = {}
            conflict = False
            for sc in act.eff:
                if sc.negated or sc.x.kind is not CoordKind.VAR or sc.y.kind is not CoordKind.VAR:
                    continue
                key = (sc.x.offset, sc.y.offset)
                if assigned.get(key, sc.pred) is not sc.pred:
                    conflict = True
                assigned[key] = sc.pred
            if conflict:
                out.append(
                    Diagnostic(
                        "warning",
                        "contradictory-effects",
                        f"{side} action {act.name!r} assigns two different predicates "
                        "to the same cell; no transition can realize it",
                    )
                )

    for side, goals in (("black", inst.black_goals), ("white", inst.white_goals)):
        for idx, cond in enumerate(goals):
            if bounds_of_condition(cond, m, n).is_empty:
                out.append(
                    Diagnostic(
                        "warning",
                        "empty-goal-bounds",
                        f"{side} goal #{idx} can never be anchored on a {m}x{n} board",
                    )
                )
            for sc in cond:
                for expr, board_max in ((sc.x, m), (sc.y, n)):
                    if expr.kind is CoordKind.CONST and expr.value > board_max:
                        out.append(
                            Diagnostic(
                                "error",
                                "goal-coordinate-off-board",
                                f"{side} goal #{idx} references absolute index "
                                f"{expr.value} beyond the {m}x{n} board",
                            )
                        )

    if inst.depth % 2 == 0:
        out.append(
            Diagnostic(
                "note",
                "even-depth",
                "depth is even: the final ply is White's, so Black can only win "
                "the last ply by leaving White without a legal move",
            )
        )
    return out

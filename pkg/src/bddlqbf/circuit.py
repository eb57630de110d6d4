"""Boolean circuits with a quantifier prefix.

Gates are and/or nodes over signed references (negative = negated); inputs
are declared in quantifier blocks.  Construction folds constants and hash-
conses structurally identical gates, so semantically trivial gates collapse.
Serialization targets QCIR-G14 and, via the Tseitin transformation, QDIMACS.

Bit vectors are least-significant-bit first and unsigned; arithmetic wraps
modulo 2^width, with out-of-range guarding left to comparator circuits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, TextIO

from .syntax import Axis, CoordExpr, CoordKind

AND = "and"
OR = "or"
VAR = "var"
TRUE = "true"


class CircuitError(Exception):
    pass


@dataclass(frozen=True)
class QuantBlock:
    quant: str  # "exists" | "forall"
    vars: tuple[int, ...]
    label: str = ""


@dataclass(frozen=True)
class BitVec:
    """Unsigned binary word as signed gate refs, least-significant first."""

    bits: tuple[int, ...]

    @property
    def width(self) -> int:
        return len(self.bits)


class Circuit:
    def __init__(self) -> None:
        self._kinds: list[str] = []
        self._children: list[tuple[int, ...]] = []
        self._var_ids: list[int] = []  # parallel; 0 for non-var gates
        self._cache: dict[tuple, int] = {}
        self._var_ref: dict[int, int] = {}
        self.prefix: list[QuantBlock] = []
        self._declared: set[int] = set()
        self._next_var = 1
        self._true: int | None = None
        self.output: int | None = None

    # -- gate store ---------------------------------------------------------

    def _new(self, kind: str, children: tuple[int, ...], var_id: int = 0) -> int:
        key = (kind, children, var_id)
        ref = self._cache.get(key)
        if ref is None:
            self._kinds.append(kind)
            self._children.append(children)
            self._var_ids.append(var_id)
            ref = len(self._kinds)  # refs are 1-based so negation works
            self._cache[key] = ref
        return ref

    def true(self) -> int:
        if self._true is None:
            self._true = self._new(TRUE, ())
        return self._true

    def false(self) -> int:
        return -self.true()

    # -- quantifier prefix ----------------------------------------------------

    def _block(self, quant: str, count: int, label: str) -> list[int]:
        ids = list(range(self._next_var, self._next_var + count))
        self._next_var += count
        self._declared.update(ids)
        self.prefix.append(QuantBlock(quant, tuple(ids), label))
        return ids

    def exists(self, count: int, label: str = "") -> list[int]:
        return self._block("exists", count, label)

    def forall(self, count: int, label: str = "") -> list[int]:
        return self._block("forall", count, label)

    def var(self, var_id: int) -> int:
        if var_id not in self._declared:
            raise CircuitError(f"variable {var_id} not declared in any quantifier block")
        ref = self._var_ref.get(var_id)
        if ref is None:
            ref = self._new(VAR, (), var_id)
            self._var_ref[var_id] = ref
        return ref

    # -- gate constructors (fold constants, dedupe, hash-cons) ----------------

    def _nary(self, kind: str, refs: Iterable[int]) -> int:
        # `kind` absorbs its identity (TRUE for and, FALSE for or) and
        # short-circuits on its zero; complementary children also collapse
        identity = self.true() if kind == AND else self.false()
        zero = -identity
        seen: set[int] = set()
        kept: list[int] = []
        for r in refs:
            if r == identity:
                continue
            if r == zero or -r in seen:
                return zero
            if r not in seen:
                seen.add(r)
                kept.append(r)
        if not kept:
            return identity
        if len(kept) == 1:
            return kept[0]
        kept.sort(key=lambda r: (abs(r), r < 0))
        return self._new(kind, tuple(kept))

    def and_(self, *refs: int) -> int:
        return self._nary(AND, refs)

    def or_(self, *refs: int) -> int:
        return self._nary(OR, refs)

    def all_(self, refs: Iterable[int]) -> int:
        return self._nary(AND, refs)

    def any_(self, refs: Iterable[int]) -> int:
        return self._nary(OR, refs)

    def implies(self, a: int, b: int) -> int:
        return self.or_(-a, b)

    def xor(self, a: int, b: int) -> int:
        return self.or_(self.and_(a, -b), self.and_(-a, b))

    def iff(self, a: int, b: int) -> int:
        return -self.xor(a, b)

    # -- bit vectors ----------------------------------------------------------

    def input_bitvec(self, var_ids: Iterable[int]) -> BitVec:
        return BitVec(tuple(self.var(v) for v in var_ids))

    def const_bitvec(self, value: int, width: int) -> BitVec:
        if value < 0 or value >> width:
            raise CircuitError(f"constant {value} does not fit in {width} bits")
        return BitVec(
            tuple(self.true() if (value >> i) & 1 else self.false() for i in range(width))
        )

    # -- statistics -----------------------------------------------------------

    def reachable(self) -> list[int]:
        """Internal indices of gates reachable from the output, ascending."""
        if self.output is None:
            raise CircuitError("circuit has no output")
        marked = [False] * len(self._kinds)
        stack = [abs(self.output)]
        while stack:
            idx = stack.pop() - 1
            if marked[idx]:
                continue
            marked[idx] = True
            for child in self._children[idx]:
                stack.append(abs(child))
        return [i for i, m in enumerate(marked) if m]

    def gate_count(self) -> int:
        """Reachable and/or gates (inputs and constants excluded)."""
        return sum(1 for i in self.reachable() if self._kinds[i] in (AND, OR))

    def var_count(self) -> int:
        return self._next_var - 1

    # -- evaluation -------------------------------------------------------------

    def evaluator(self) -> Callable[[dict[int, bool]], bool]:
        """Compile the reachable part into a reusable evaluation closure."""
        order = self.reachable()
        kinds = self._kinds
        children = self._children
        var_ids = self._var_ids
        output = self.output

        def run(assignment: dict[int, bool]) -> bool:
            values: dict[int, bool] = {}
            for idx in order:
                kind = kinds[idx]
                if kind == VAR:
                    try:
                        val = assignment[var_ids[idx]]
                    except KeyError:
                        raise CircuitError(
                            f"assignment misses variable {var_ids[idx]}"
                        ) from None
                elif kind == TRUE:
                    val = True
                elif kind == AND:
                    val = all(
                        values[abs(c)] ^ (c < 0) for c in children[idx]
                    )
                else:
                    val = any(
                        values[abs(c)] ^ (c < 0) for c in children[idx]
                    )
                values[idx + 1] = val
            return values[abs(output)] ^ (output < 0)

        return run

    def evaluate(self, assignment: dict[int, bool]) -> bool:
        """Value of the output under a total assignment of the prefix variables."""
        missing = self._declared - assignment.keys()
        if missing:
            raise CircuitError(f"assignment misses variables {sorted(missing)}")
        return self.evaluator()(assignment)


# -- arithmetic sub-circuits ---------------------------------------------------


def adder(circ: Circuit, v: BitVec, k: int) -> BitVec:
    """Ripple-carry v + k modulo 2^width (k a constant)."""
    if k < 0 or (v.width == 0 and k != 0) or (v.width and k >> v.width):
        raise CircuitError(f"addend {k} too large for width {v.width}")
    carry = circ.false()
    out = []
    for i, bit in enumerate(v.bits):
        if (k >> i) & 1:
            out.append(-circ.xor(bit, carry))
            carry = circ.or_(bit, carry)
        else:
            out.append(circ.xor(bit, carry))
            carry = circ.and_(bit, carry)
    return BitVec(tuple(out))


def subtractor(circ: Circuit, v: BitVec, k: int) -> BitVec:
    """v - k modulo 2^width via addition of the two's complement of k."""
    if k < 0 or (v.width == 0 and k != 0) or (v.width and k >> v.width):
        raise CircuitError(f"subtrahend {k} too large for width {v.width}")
    if v.width == 0:
        return v
    return adder(circ, v, (-k) % (1 << v.width))


def compute(circ: Circuit, v: BitVec, expr: CoordExpr, board_max: int, axis: Axis) -> BitVec:
    """Coordinate expression applied to a position word.

    ?x/?y pass the word through (plus adder/subtractor for offsets); integer
    and min/max expressions become constants at the word's width.
    """
    if expr.axis is not axis:
        raise CircuitError(f"{expr.render()} used on the {axis.value}-axis")
    if expr.kind is CoordKind.VAR:
        if expr.offset > 0:
            return adder(circ, v, expr.offset)
        if expr.offset < 0:
            return subtractor(circ, v, -expr.offset)
        return v
    if expr.kind is CoordKind.CONST:
        value = expr.value
    elif expr.kind is CoordKind.MIN:
        value = 1
    else:
        value = board_max
    return circ.const_bitvec(value, v.width)


def equality(circ: Circuit, a: BitVec | int, b: BitVec | int) -> int:
    """Single gate, true iff the two unsigned values are equal.

    Integer operands become literal patterns; two words of different widths
    compare with the narrower padded by constant-false high bits.
    """
    if isinstance(a, int) and isinstance(b, int):
        return circ.true() if a == b else circ.false()
    if isinstance(a, int):
        a, b = b, a
    if isinstance(b, int):
        if b < 0 or (b >> a.width if a.width else b):
            return circ.false()
        return circ.all_(
            bit if (b >> i) & 1 else -bit for i, bit in enumerate(a.bits)
        )
    width = max(a.width, b.width)
    abits = a.bits + (circ.false(),) * (width - a.width)
    bbits = b.bits + (circ.false(),) * (width - b.width)
    return circ.all_(-circ.xor(x, y) for x, y in zip(abits, bbits))


def less_than(circ: Circuit, v: BitVec, k: int) -> int:
    """Single gate, true iff the unsigned value of v is less than k."""
    if k <= 0:
        return circ.false()
    if v.width == 0 or k >= (1 << v.width):
        return circ.true()
    acc = circ.false()
    for i, bit in enumerate(v.bits):
        if (k >> i) & 1:
            acc = circ.or_(-bit, acc)
        else:
            acc = circ.and_(-bit, acc)
    return acc


# -- serialization ---------------------------------------------------------------


def _merged_prefix(circ: Circuit) -> list[tuple[str, list[int]]]:
    merged: list[tuple[str, list[int]]] = []
    for block in circ.prefix:
        if not block.vars:
            continue
        if merged and merged[-1][0] == block.quant:
            merged[-1][1].extend(block.vars)
        else:
            merged.append((block.quant, list(block.vars)))
    return merged


def write_qcir(circ: Circuit, out: TextIO) -> None:
    """QCIR-G14 text: header, merged prefix, output, one gate per line."""
    if circ.output is None:
        raise CircuitError("circuit has no output")
    out.write("#QCIR-G14\n")
    for quant, ids in _merged_prefix(circ):
        out.write(f"{quant}({', '.join(map(str, ids))})\n")

    order = circ.reachable()
    number: dict[int, int] = {}
    next_number = circ.var_count() + 1
    gate_indices: list[int] = []
    for idx in order:
        if circ._kinds[idx] == VAR:
            number[idx + 1] = circ._var_ids[idx]
        else:
            number[idx + 1] = next_number
            next_number += 1
            gate_indices.append(idx)

    def lit(ref: int) -> int:
        return number[abs(ref)] if ref > 0 else -number[abs(ref)]

    output_ref = circ.output
    lines = []
    for idx in gate_indices:
        kind = circ._kinds[idx]
        args = ", ".join(str(lit(c)) for c in circ._children[idx])
        name = AND if kind in (AND, TRUE) else OR
        lines.append(f"{number[idx + 1]} = {name}({args})\n")
    if circ._kinds[abs(output_ref) - 1] == VAR:
        # alias gate so the document always defines its output gate
        alias = next_number
        lines.append(f"{alias} = and({lit(abs(output_ref))})\n")
        out.write(f"output({alias if output_ref > 0 else -alias})\n")
    else:
        out.write(f"output({lit(output_ref)})\n")
    out.writelines(lines)


def tseitin_to_qdimacs(circ: Circuit, out: TextIO) -> None:
    """Equisatisfiable prenex CNF: one fresh existential variable per gate,
    biconditional clauses per gate, and a unit clause asserting the output."""
    if circ.output is None:
        raise CircuitError("circuit has no output")
    order = circ.reachable()
    number: dict[int, int] = {}
    next_number = circ.var_count() + 1
    gate_numbers: list[int] = []
    gate_indices: list[int] = []
    for idx in order:
        if circ._kinds[idx] == VAR:
            number[idx + 1] = circ._var_ids[idx]
        else:
            number[idx + 1] = next_number
            gate_numbers.append(next_number)
            gate_indices.append(idx)
            next_number += 1

    def lit(ref: int) -> int:
        return number[abs(ref)] if ref > 0 else -number[abs(ref)]

    clauses: list[list[int]] = []
    for idx in gate_indices:
        kind = circ._kinds[idx]
        g = number[idx + 1]
        children = [lit(c) for c in circ._children[idx]]
        if kind == TRUE:
            clauses.append([g])
        elif kind == AND:
            for c in children:
                clauses.append([-g, c])
            clauses.append([g] + [-c for c in children])
        else:
            for c in children:
                clauses.append([g, -c])
            clauses.append([-g] + children)
    clauses.append([lit(circ.output)])

    blocks = _merged_prefix(circ)
    if gate_numbers:
        if blocks and blocks[-1][0] == "exists":
            blocks[-1][1].extend(gate_numbers)
        else:
            blocks.append(("exists", gate_numbers))

    out.write(f"p cnf {next_number - 1} {len(clauses)}\n")
    for quant, ids in blocks:
        out.write(f"{'e' if quant == 'exists' else 'a'} {' '.join(map(str, ids))} 0\n")
    for clause in clauses:
        out.write(" ".join(map(str, clause)) + " 0\n")

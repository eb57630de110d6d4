import io
import itertools
import random

from bddlqbf.circuit import Circuit, tseitin_to_qdimacs, write_qcir
from bddlqbf.encoder import encode
from helpers import load
from qbfeval import dpll_sat, parse_qcir, parse_qdimacs, qbf_decide, qdimacs_decide


def qcir_text(circ):
    buf = io.StringIO()
    write_qcir(circ, buf)
    return buf.getvalue()


def qdimacs_text(circ):
    buf = io.StringIO()
    tseitin_to_qdimacs(circ, buf)
    return buf.getvalue()


def random_circuit(rng, num_vars, num_gates, universal_mask=0):
    circ = Circuit()
    refs = []
    offset = 0
    for bit in range(num_vars):
        block = circ.forall(1) if (universal_mask >> bit) & 1 else circ.exists(1)
        refs.append(circ.var(block[0]))
        offset += 1
    for _ in range(num_gates):
        arity = rng.randint(0, 3)
        children = [rng.choice(refs) * rng.choice((1, -1)) for _ in range(arity)]
        op = circ.and_ if rng.random() < 0.5 else circ.or_
        refs.append(op(*children))
    circ.output = refs[-1] * rng.choice((1, -1))
    return circ


def brute_truth_table(circ):
    declared = [v for block in circ.prefix for v in block.vars]
    run = circ.evaluator()
    table = []
    for bits in itertools.product((False, True), repeat=len(declared)):
        table.append(run(dict(zip(declared, bits))))
    return table


def test_qcir_header_and_shape():
    circ = Circuit()
    (x,) = circ.exists(1, "x")
    circ.output = circ.and_(circ.var(x))
    lines = qcir_text(circ).splitlines()
    assert lines[0] == "#QCIR-G14"
    assert lines[1] == "exists(1)"
    assert lines[2] == "output(2)"
    assert lines[3] == "2 = and(1)"
    assert len(lines) == 4


def test_qcir_merges_adjacent_same_quantifier_blocks():
    circ = Circuit()
    a = circ.exists(2, "a")
    b = circ.exists(1, "b")
    c = circ.forall(1, "c")
    circ.output = circ.and_(circ.var(a[0]), circ.var(b[0]), circ.var(c[0]))
    lines = qcir_text(circ).splitlines()
    assert lines[1] == "exists(1, 2, 3)"
    assert lines[2] == "forall(4)"


def test_qcir_round_trip_truth_tables():
    rng = random.Random(3)
    for trial in range(40):
        num_vars = rng.randint(1, 7)
        circ = random_circuit(rng, num_vars, rng.randint(1, 12))
        reparsed = parse_qcir(qcir_text(circ))
        assert brute_truth_table(circ) == brute_truth_table(reparsed), trial
    for trial in range(4):  # at the stated 12-variable ceiling
        circ = random_circuit(rng, 12, rng.randint(10, 24))
        reparsed = parse_qcir(qcir_text(circ))
        assert brute_truth_table(circ) == brute_truth_table(reparsed), trial


def test_qcir_round_trip_encoded_instance():
    dom, inst = load("domineering-2x2")
    enc = encode(dom, inst)
    reparsed = parse_qcir(qcir_text(enc.circuit))
    assert [(b.quant, b.vars) for b in reparsed.prefix if b.vars] == [
        (q, tuple(ids))
        for q, ids in _merged(enc.circuit)
    ]
    assert qbf_decide(reparsed) == qbf_decide(enc.circuit)


def _merged(circ):
    out = []
    for block in circ.prefix:
        if not block.vars:
            continue
        if out and out[-1][0] == block.quant:
            out[-1][1].extend(block.vars)
        else:
            out.append([block.quant, list(block.vars)])
    return [(q, ids) for q, ids in out]


def test_qdimacs_header_counts_and_terminators():
    dom, inst = load("positional-1x1")
    enc = encode(dom, inst)
    text = qdimacs_text(enc.circuit)
    num_vars, blocks, clauses = parse_qdimacs(text)
    lines = text.splitlines()
    assert lines[0] == f"p cnf {num_vars} {len(clauses)}"
    for quant, ids in blocks:
        assert ids  # no empty quantifier lines
    assert all(line.endswith(" 0") for line in lines[1:])


def test_qdimacs_gate_variables_go_to_innermost_existential_block():
    circ = Circuit()
    (x,) = circ.exists(1)
    (u,) = circ.forall(1)
    circ.output = circ.or_(circ.and_(circ.var(x), circ.var(u)), -circ.var(u))
    num_vars, blocks, _ = parse_qdimacs(qdimacs_text(circ))
    assert blocks[-1][0] == "exists"
    assert set(blocks[-1][1]) == set(range(3, num_vars + 1))


def test_tseitin_equisatisfiable_existential_circuits():
    rng = random.Random(9)
    for trial in range(60):
        circ = random_circuit(rng, rng.randint(1, 6), rng.randint(1, 14))
        sat_circuit = any(brute_truth_table(circ))
        num_vars, _, clauses = parse_qdimacs(qdimacs_text(circ))
        assert dpll_sat(clauses, num_vars) == sat_circuit, trial


def test_tseitin_preserves_qbf_truth_with_universals():
    rng = random.Random(10)
    for trial in range(40):
        num_vars = rng.randint(1, 6)
        mask = rng.randrange(1 << num_vars)
        circ = random_circuit(rng, num_vars, rng.randint(1, 12), universal_mask=mask)
        if circ.prefix[-1].quant == "forall" and circ.output is not None:
            pass  # gate block gets appended as a fresh existential block
        assert qdimacs_decide(qdimacs_text(circ)) == qbf_decide(circ), trial


def test_constant_true_output_yields_trivially_satisfiable_cnf():
    circ = Circuit()
    circ.exists(1)
    circ.output = circ.true()
    num_vars, _, clauses = parse_qdimacs(qdimacs_text(circ))
    assert dpll_sat(clauses, num_vars)
    circ.output = circ.false()
    num_vars, _, clauses = parse_qdimacs(qdimacs_text(circ))
    assert not dpll_sat(clauses, num_vars)


def test_and_of_duplicated_literal_semantics():
    # and(x, x) collapses structurally; the CNF stays equisatisfiable
    circ = Circuit()
    (x,) = circ.exists(1)
    circ.output = circ.and_(circ.var(x), circ.var(x))
    num_vars, blocks, clauses = parse_qdimacs(qdimacs_text(circ))
    assert dpll_sat(clauses, num_vars)
    assert clauses == [[1]]


def test_qdimacs_of_encoded_instance_matches_circuit_truth():
    # generic CNF-level QBF decision only scales to the smallest encoding;
    # larger cross-format agreement runs under the external-solver differential
    dom, inst = load("positional-1x1")
    enc = encode(dom, inst)
    assert qdimacs_decide(qdimacs_text(enc.circuit)) == qbf_decide(enc.circuit)

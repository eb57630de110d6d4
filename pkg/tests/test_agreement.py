"""Full-expansion agreement: the truth value of the encoded circuit equals
the explicit-state oracle on every bundled instance small enough to expand."""

import pytest

from bddlqbf.encoder import encode
from bddlqbf.oracle import Oracle
from helpers import expansion_scale_models, interleaved_order, load
from qbfeval import qbf_decide


@pytest.mark.parametrize("name", expansion_scale_models())
def test_encoded_circuit_agrees_with_oracle(name):
    dom, inst = load(name)
    want = Oracle(dom, inst).solve().black_wins
    enc = encode(dom, inst)
    got = qbf_decide(enc.circuit, order=interleaved_order(enc.layout))
    assert got == want, f"{name}: circuit={got}, oracle={want}"


@pytest.mark.parametrize(
    "name,depth",
    [
        ("connect2-2x2", 1),
        ("connect2-3x3", 1),
        ("lines2-3x3", 5),
        ("tictactoe-3x3", 3),
        ("domineering-2x3", 2),
        ("domineering-3x3", 2),
        ("domineering-2x4", 2),
        ("evader-pursuer-3x3", 1),
        ("breakthrough-2x4-d3", 1),
        ("knightthrough-3x4", 3),
    ],
)
def test_agreement_at_alternate_depths(name, depth):
    dom, inst = load(name, depth)
    want = Oracle(dom, inst).solve().black_wins
    enc = encode(dom, inst)
    got = qbf_decide(enc.circuit, order=interleaved_order(enc.layout))
    assert got == want, f"{name}@d{depth}: circuit={got}, oracle={want}"


def test_expansion_scale_covers_the_small_corpus():
    names = expansion_scale_models()
    assert "tictactoe-3x3" in names  # 9 cells, depth 5: the heavy witness
    assert "knightthrough-3x4" in names  # 12 cells on the nose
    assert "connect2-4x4" not in names  # 16 cells: beyond expansion scale
    assert "domineering-3x4" not in names  # depth 6: beyond expansion scale
    assert len(names) >= 12

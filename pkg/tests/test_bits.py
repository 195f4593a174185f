import itertools

import numpy as np
import pytest

from labstate import bits
from labstate.bits import (
    ABAR,
    BASIC_OPS,
    IDENTITY,
    NAMED_OPS,
    A,
    BitOp,
    C,
    D,
    P0,
    P1,
    PBitState,
    Question,
    Z,
    apply,
    bracket,
    complement,
    compose,
    enumerate_bitops,
    intersect,
    union,
)

GROUND, SIGNAL, FAULTY, EMPTY = PBitState
STATES = list(PBitState)


def test_state_encoding():
    assert [int(s) for s in STATES] == [0, 1, 2, 3]
    assert GROUND.subset == frozenset({0})
    assert FAULTY.subset == frozenset({0, 1})
    assert EMPTY.subset == frozenset()
    assert GROUND.is_normal() and SIGNAL.is_normal()
    assert not FAULTY.is_normal() and not EMPTY.is_normal()


@pytest.mark.parametrize("op, s, out", [
    (A, SIGNAL, GROUND),
    (C, EMPTY, GROUND),
    (IDENTITY, FAULTY, FAULTY),
    (ABAR, GROUND, SIGNAL),
    (ABAR, SIGNAL, EMPTY),
    (D, GROUND, FAULTY),
    (D, SIGNAL, FAULTY),
    (D, EMPTY, EMPTY),
    (Z, FAULTY, EMPTY),
])
def test_apply(op, s, out):
    assert apply(op, s) is out
    assert op(s) is out


def test_compose_examples():
    # Table 2: row A times column Abar is P0 (Abar acts first)
    assert compose(A, ABAR) == P0
    assert compose(ABAR, A) == P1
    assert compose(ABAR, ABAR) == Z
    assert compose(P0, P1) == Z
    assert A @ ABAR == P0


def test_compose_applies_right_factor_first():
    for o2, o1 in itertools.product(enumerate_bitops()[::17], repeat=2):
        for s in STATES:
            assert compose(o2, o1)(s) == o2(o1(s))


@pytest.mark.parametrize("q, s, val", [(0, 0, 1), (3, 3, 1), (1, 3, 0)])
def test_bracket_examples(q, s, val):
    assert bracket(Question(q), PBitState(s)) == val
    assert bracket(q, s) == val


def test_set_examples():
    assert union(GROUND, SIGNAL) is FAULTY
    assert complement(EMPTY) is FAULTY
    assert complement(GROUND) is SIGNAL
    assert intersect(GROUND, SIGNAL) is EMPTY


def test_boolean_laws_exhaustive():
    for a, b, c in itertools.product(STATES, repeat=3):
        assert union(a, a) is a and intersect(a, a) is a
        assert union(a, b) is union(b, a)
        assert intersect(a, b) is intersect(b, a)
        assert union(union(a, b), c) is union(a, union(b, c))
        assert intersect(intersect(a, b), c) is intersect(a, intersect(b, c))
        assert intersect(a, union(b, c)) is union(intersect(a, b), intersect(a, c))
        assert complement(union(a, b)) is intersect(complement(a), complement(b))
        assert complement(intersect(a, b)) is union(complement(a), complement(b))
        assert complement(complement(a)) is a


def test_census():
    ops = enumerate_bitops()
    assert len(ops) == 256 == len(set(ops))
    assert set(NAMED_OPS.values()) <= set(ops)
    assert [o.code for o in ops] == list(range(256))


def test_closure_and_associativity_sampled():
    ops = enumerate_bitops()
    sample = ops[::7]
    opset = set(ops)
    for x, y, z in itertools.product(sample, repeat=3):
        assert compose(compose(x, y), z) == compose(x, compose(y, z))
        assert compose(x, y) in opset


def test_matrix_columns_and_homomorphism():
    ops = enumerate_bitops()
    for o in ops:
        m = o.matrix()
        assert m.shape == (4, 4)
        assert (m.sum(axis=0) == 1).all()
        assert BitOp.from_matrix(m) == o
    for o2, o1 in itertools.product(ops[::5], repeat=2):
        assert np.array_equal(compose(o2, o1).matrix(), o2.matrix() @ o1.matrix())


def test_from_matrix_rejects_nondeterministic():
    with pytest.raises(ValueError):
        BitOp.from_matrix(np.zeros((4, 4), dtype=int))


def test_idempotent_and_nilpotent():
    for op in (P0, P1, D, C):
        assert compose(op, op) == op
    assert compose(A, A) == Z
    assert compose(ABAR, ABAR) == Z
    assert compose(Z, IDENTITY) == Z


def test_z_is_a_zero():
    for o in enumerate_bitops():
        if o(EMPTY) is EMPTY:
            assert compose(o, Z) == Z
        assert compose(Z, o) == Z


def test_product_table_and_isomorphism():
    names = {v: k for k, v in NAMED_OPS.items()}
    table = [[names[o] for o in row] for row in bits.product_table(BASIC_OPS)]
    assert table == [
        ["P0", "Z", "A", "Z"],
        ["Z", "P1", "Z", "Abar"],
        ["Z", "A", "Z", "P0"],
        ["Abar", "Z", "P1", "Z"],
    ]
    qubit = bits.qubit_product_table()
    to_bit = {"p0": "P0", "p1": "P1", "a": "A", "a+": "Abar", "0": "Z"}
    assert [[to_bit[x] for x in row] for row in qubit] == table


def test_format_table_grid():
    text = bits.format_table(BASIC_OPS)
    lines = text.splitlines()
    assert len(lines) == 6
    assert lines[0].split("|")[1].split() == ["P0", "P1", "A", "Abar"]
    assert lines[5].split() == ["Abar", "|", "Abar", "Z", "P1", "Z"]


def test_labels():
    assert A.label() == "A"
    assert compose(D, C).label().startswith("O")

"""Power-set bits: the four states of one detector and the 256 maps between them.

A detector (ESD) is in one of four states, the subsets of ``{0, 1}``:

====== ===== =========================
value  set   meaning
====== ===== =========================
0      {0}   ground
1      {1}   signal
2      {0,1} faulty / decommissioned
3      {}    empty (no detector)
====== ===== =========================

A :class:`BitOp` is any total map on these four states, stored as its image
table.  Composition is table lookup; the 4x4 0/1 matrix form is derived on
demand and multiplies like the operators compose.
"""
from __future__ import annotations

import itertools
from enum import IntEnum
from typing import Iterable, NamedTuple

import numpy as np

__all__ = [
    "PBitState",
    "GROUND",
    "SIGNAL",
    "FAULTY",
    "EMPTY",
    "Question",
    "bracket",
    "union",
    "intersect",
    "complement",
    "BitOp",
    "apply",
    "compose",
    "enumerate_bitops",
    "IDENTITY",
    "Z",
    "P0",
    "P1",
    "A",
    "ABAR",
    "C",
    "D",
    "NAMED_OPS",
    "BASIC_OPS",
    "product_table",
    "format_table",
    "qubit_product_table",
]


class PBitState(IntEnum):
    GROUND = 0
    SIGNAL = 1
    FAULTY = 2
    EMPTY = 3

    @property
    def subset(self) -> frozenset:
        return _SUBSETS[self]

    @classmethod
    def from_subset(cls, s) -> "PBitState":
        return _FROM_SUBSET[frozenset(s)]

    def is_normal(self) -> bool:
        return self in (PBitState.GROUND, PBitState.SIGNAL)

    def __str__(self):
        return _LABELS[self]


GROUND, SIGNAL, FAULTY, EMPTY = PBitState

_SUBSETS = {
    GROUND: frozenset({0}),
    SIGNAL: frozenset({1}),
    FAULTY: frozenset({0, 1}),
    EMPTY: frozenset(),
}
_FROM_SUBSET = {v: k for k, v in _SUBSETS.items()}
_LABELS = {GROUND: "|0)", SIGNAL: "|1)", FAULTY: "|B)", EMPTY: "|∅)"}


class Question(NamedTuple):
    """The dual ``(index|``: asks whether a detector is in state ``index``."""

    index: int


def bracket(q, s) -> int:
    """``(q|s)``: 1 when the question matches the state, else 0."""
    qi = q.index if isinstance(q, Question) else int(q)
    if not 0 <= qi <= 3:
        raise ValueError(f"question index out of range: {qi}")
    return int(qi == PBitState(s))


def union(s, t) -> PBitState:
    return PBitState.from_subset(PBitState(s).subset | PBitState(t).subset)


def intersect(s, t) -> PBitState:
    return PBitState.from_subset(PBitState(s).subset & PBitState(t).subset)


def complement(s) -> PBitState:
    return PBitState.from_subset(frozenset({0, 1}) - PBitState(s).subset)


class BitOp:
    """A total map on :class:`PBitState`, ``image[j] = O|j)``."""

    __slots__ = ("image", "name")

    def __init__(self, image: Iterable, name: str | None = None):
        image = tuple(PBitState(x) for x in image)
        if len(image) != 4:
            raise ValueError("a bit operator needs exactly four images")
        object.__setattr__(self, "image", image)
        object.__setattr__(self, "name", name)

    def __setattr__(self, key, value):
        raise AttributeError("BitOp is immutable")

    def __call__(self, s) -> PBitState:
        return self.image[PBitState(s)]

    def __matmul__(self, other: "BitOp") -> "BitOp":
        """``self @ other`` applies ``other`` first, like the product ``O2 O1``."""
        return compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, BitOp):
            return NotImplemented
        return self.image == other.image

    def __hash__(self):
        return hash(self.image)

    @property
    def code(self) -> int:
        """Index 0..255 of this operator in :func:`enumerate_bitops` order."""
        return sum(int(v) * 4**j for j, v in enumerate(self.image))

    def matrix(self) -> np.ndarray:
        m = np.zeros((4, 4), dtype=np.int64)
        m[list(map(int, self.image)), range(4)] = 1
        return m

    @classmethod
    def from_matrix(cls, m) -> "BitOp":
        m = np.asarray(m)
        if m.shape != (4, 4) or not np.array_equal(m.sum(axis=0), np.ones(4)):
            raise ValueError("bit matrix needs exactly one 1 per column")
        if not np.isin(m, (0, 1)).all():
            raise ValueError("bit matrix entries must be 0 or 1")
        return cls(int(np.argmax(m[:, j])) for j in range(4))

    def label(self) -> str:
        if self.name:
            return self.name
        named = _BY_IMAGE.get(self.image)
        return named.name if named is not None else f"O{self.code}"

    def __repr__(self):
        return f"BitOp({[int(v) for v in self.image]}, {self.label()!r})"


def apply(op: BitOp, s) -> PBitState:
    return op.image[PBitState(s)]


def compose(o2: BitOp, o1: BitOp) -> BitOp:
    """The product ``O2 O1``: apply ``o1`` then ``o2``."""
    return BitOp(o2.image[v] for v in o1.image)


def enumerate_bitops() -> list[BitOp]:
    """All ``4**4`` bit operators, indexed by :attr:`BitOp.code`."""
    return [BitOp(reversed(img)) for img in itertools.product(PBitState, repeat=4)]


IDENTITY = BitOp((GROUND, SIGNAL, FAULTY, EMPTY), "I")
Z = BitOp((EMPTY,) * 4, "Z")
P0 = BitOp((GROUND, EMPTY, EMPTY, EMPTY), "P0")
P1 = BitOp((EMPTY, SIGNAL, EMPTY, EMPTY), "P1")
A = BitOp((EMPTY, GROUND, EMPTY, EMPTY), "A")
ABAR = BitOp((SIGNAL, EMPTY, EMPTY, EMPTY), "Abar")
C = BitOp((GROUND,) * 4, "C")
# debris survives decommissioning; only a missing detector stays missing
D = BitOp((FAULTY, FAULTY, FAULTY, EMPTY), "D")

NAMED_OPS = {op.name: op for op in (IDENTITY, Z, P0, P1, A, ABAR, C, D)}
_BY_IMAGE = {op.image: op for op in NAMED_OPS.values()}
BASIC_OPS = (P0, P1, A, ABAR)


def product_table(ops=BASIC_OPS) -> list[list[BitOp]]:
    """``table[r][c] = ops[r] ops[c]`` (row operator applied last)."""
    return [[compose(r, c) for c in ops] for r in ops]


def format_table(ops=BASIC_OPS) -> str:
    """Aligned product grid, row operator times column operator."""
    table = product_table(ops)
    cells = [[""] + [o.label() for o in ops]]
    for r, row in zip(ops, table):
        cells.append([r.label()] + [x.label() for x in row])
    width = max(len(c) for line in cells for c in line)
    lines = []
    for k, line in enumerate(cells):
        head, rest = line[0], line[1:]
        lines.append(f"{head:<{width}} | " + "  ".join(f"{c:<{width}}" for c in rest))
        if k == 0:
            lines.append("-" * len(lines[0]))
    return "\n".join(line.rstrip() for line in lines)


# Plain qubit operators on span{|0>, |1>}; products resolved back to names
# with the zero matrix as "0".
_QUBIT = {
    "p0": np.array([[1, 0], [0, 0]]),
    "p1": np.array([[0, 0], [0, 1]]),
    "a": np.array([[0, 1], [0, 0]]),
    "a+": np.array([[0, 0], [1, 0]]),
}


def qubit_product_table() -> list[list[str]]:
    names = list(_QUBIT)
    out = []
    for r in names:
        row = []
        for c in names:
            prod = _QUBIT[r] @ _QUBIT[c]
            if not prod.any():
                row.append("0")
                continue
            match = [n for n, m in _QUBIT.items() if np.array_equal(m, prod)]
            if len(match) != 1:
                raise AssertionError(f"{r}{c} is not a basic qubit operator")
            row.append(match[0])
        out.append(row)
    return out

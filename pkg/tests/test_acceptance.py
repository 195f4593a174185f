"""Acceptance criteria 1-10, each at its stated tolerance (exact unless noted).

Every test records one PASS/FAIL line through the ``criterion`` fixture; the
lines are repeated in the terminal summary.
"""
import itertools
import random
import time
from fractions import Fraction as F

import numpy as np

from labstate import bits
from labstate.amplitude import RealQ2, amp_sqmod
from labstate.bits import ABAR, P0, P1, A, bracket, compose, enumerate_bitops
from labstate.network import Bomb, ev_scenario, hardy_scenario, run_ev, run_hardy, stockpile_yield
from labstate.quantum import Labstate, check_isometry, inner, monomials_of
from labstate.register import PermutationFlow, count_dynamics, signality

# Table 2 as printed: row operator times column operator.
TABLE_2_TEXT = [
    ["P0", "Z", "A", "Z"],
    ["Z", "P1", "Z", "Abar"],
    ["Z", "A", "Z", "P0"],
    ["Abar", "Z", "P1", "Z"],
]
# Table 1 as printed, same layout.
TABLE_1_TEXT = [
    ["p0", "0", "a", "0"],
    ["0", "p1", "0", "a+"],
    ["0", "a", "0", "p0"],
    ["a+", "0", "p1", "0"],
]
QUBIT_TO_BIT = {"p0": "P0", "p1": "P1", "a": "A", "a+": "Abar", "0": "Z"}


def _qubit_table_oracle():
    """Multiply the 2x2 qubit matrices directly and name each product."""
    e0, e1 = np.array([[1], [0]]), np.array([[0], [1]])
    mats = {"p0": e0 @ e0.T, "p1": e1 @ e1.T, "a": e0 @ e1.T, "a+": e1 @ e0.T, "0": np.zeros((2, 2), int)}
    order = ["p0", "p1", "a", "a+"]
    out = []
    for r in order:
        row = []
        for c in order:
            prod = mats[r] @ mats[c]
            row.append(next(k for k, m in mats.items() if np.array_equal(m, prod)))
        out.append(row)
    return out


def test_criterion_01_operator_tables(criterion):
    names = {v: k for k, v in bits.NAMED_OPS.items()}
    got = [[names[o] for o in row] for row in bits.product_table([P0, P1, A, ABAR])]
    table2 = got == TABLE_2_TEXT
    qubit = _qubit_table_oracle()
    table1 = qubit == TABLE_1_TEXT and bits.qubit_product_table() == TABLE_1_TEXT
    iso = all(QUBIT_TO_BIT[TABLE_1_TEXT[r][c]] == got[r][c] for r in range(4) for c in range(4))
    ok = criterion(1, "Table 2 reproduced (16 entries) and isomorphic to Table 1", table2 and table1 and iso,
                   f"table2={table2} table1={table1} iso={iso}")
    assert ok


def test_criterion_02_bracket_rule(criterion):
    results = [bracket(i, j) == (1 if i == j else 0) for i in range(4) for j in range(4)]
    ok = criterion(2, "(i|j) = delta_ij for all 16 pairs", len(results) == 16 and all(results))
    assert ok


def test_criterion_03_bitop_census(criterion):
    t0 = time.perf_counter()
    ops = enumerate_bitops()
    distinct = len(set(ops))
    # every total map on four points, built independently of the library
    every_map = {tuple(img) for img in itertools.product(range(4), repeat=4)}
    census = len(ops) == 256 and distinct == 256 and {tuple(int(x) for x in o.image) for o in ops} == every_map
    opset = set(ops)
    closed = all(compose(o2, o1) in opset for o2 in ops for o1 in ops)
    mats = np.stack([o.matrix() for o in ops])
    position = {o: n for n, o in enumerate(ops)}
    comp_idx = np.array([[position[compose(o2, o1)] for o1 in ops] for o2 in ops])
    prods = np.einsum("aij,bjk->abik", mats, mats)
    hom = bool(np.array_equal(prods, mats[comp_idx]))
    elapsed = time.perf_counter() - t0
    ok = criterion(3, "256 bit operators, closed, [O2O1]=[O2][O1] for 65536 pairs, < 1 s",
                   census and closed and hom and elapsed < 1.0,
                   f"census={census} closed={closed} hom={hom} t={elapsed:.2f}s")
    assert ok


def test_criterion_04_ev_dud(criterion):
    p = run_ev(Bomb.DUD)
    probs = p == {"Explode": 0, "D6": 1, "D7": 0}
    final = ev_scenario(Bomb.DUD).final_state()
    target = Labstate.parse("A6", range(1, 8))
    # same ray: |(target|final)|^2 = 1 for two unit vectors
    phase_eq = final.is_normalized() and amp_sqmod(inner(target, final)) == RealQ2(1)
    ok = criterion(4, "EV dud: P(Explode)=0, P(D6)=1, P(D7)=0, final = Abar6|0) up to phase",
                   probs and phase_eq, f"{p}, phase_eq={phase_eq}")
    assert ok


def test_criterion_05_ev_active(criterion):
    p = run_ev(Bomb.ACTIVE)
    ok = criterion(5, "EV active: P(Explode)=1/2, P(D6)=1/4, P(D7)=1/4",
                   p == {"Explode": F(1, 2), "D6": F(1, 4), "D7": F(1, 4)}, str(p))
    assert ok


def test_criterion_06_ev_mixture(criterion):
    bad = []
    for w in (F(0), F(1, 2), F(1)):
        p = run_ev(w)
        if p["D6"] != w / 4 + (1 - w) or p["D7"] != w / 4:
            bad.append((w, p))
    ok = criterion(6, "EV mixture at omega_A in {0, 1/2, 1}: P(D6)=w/4+w_D, P(D7)=w/4", not bad, str(bad))
    assert ok


def test_criterion_07_stockpile(criterion):
    partial = [stockpile_yield(n) for n in range(1, 41)]
    one = partial[0] == F(1, 4)
    limit = stockpile_yield() == F(1, 3)
    mono = all(a < b for a, b in zip(partial, partial[1:])) and all(x < F(1, 3) for x in partial)
    ok = criterion(7, "stockpile: one sweep 1/4, limit 1/3, partial sums monotone",
                   one and limit and mono, f"one={one} limit={limit} monotone={mono}")
    assert ok


def test_criterion_08_hardy(criterion):
    p = run_hardy()
    expected = {"6,8": F(1, 16), "7,8": F(1, 16), "7,9": F(1, 16), "6,9": F(9, 16), "Annihilation": F(1, 4)}
    match = all(p[k] == v for k, v in expected.items())
    total = sum(p.values()) == 1
    ok = criterion(8, "Hardy: 1/16, 1/16, 1/16, 9/16, 1/4; sum 1; P(7,8) != 0",
                   match and total and p["7,8"] != 0, str(p))
    assert ok


def test_criterion_09_hardy_intermediate(criterion):
    psi2 = hardy_scenario().run()[2]
    paper = Labstate.parse(
        "(2/4)*D3*D4 + (i/4)*A6*A8 + (-1/4)*A7*A8 + (-3/4)*A6*A9 + (i/4)*A7*A9",
        range(1, 10),
    )
    ok = criterion(9, "Hardy |Psi,2) coefficients match exactly", psi2 == paper and psi2.terms == paper.terms)
    assert ok


def _gram_is_identity(smap, domain, sites):
    """Float route: Gram matrix of the images over the domain is the identity."""
    images = [smap.image_state(m, sites) for m in domain]
    configs = sorted({c for s in images for c in s.terms})
    vecs = np.array([[complex(s.amplitude(c)) for c in configs] for s in images])
    gram = vecs.conj() @ vecs.T
    return np.allclose(gram, np.eye(len(domain)), atol=1e-12)


def _all_compiled_maps_isometric():
    ok = True
    for sc in (ev_scenario(Bomb.DUD), ev_scenario(Bomb.ACTIVE), hardy_scenario(), hardy_scenario(True)):
        states = sc.run()
        for smap, state in zip(sc.stages, states):
            domain = {frozenset()} | set(smap.rules) | monomials_of(state, smap)
            domain = sorted(domain, key=lambda m: sorted(m))
            ok &= check_isometry(smap, domain)
            ok &= _gram_is_identity(smap, domain, sc.sites)
    return ok


def _recurs_within(perm, k, bound):
    x = perm[k]
    for _ in range(bound - 1):
        if x == k:
            return True
        x = perm[x]
    return x == k


def test_criterion_10_properties(criterion):
    iso = _all_compiled_maps_isometric()

    rank2 = 0
    rec2 = True
    for perm in itertools.permutations(range(4)):
        f = PermutationFlow(perm)
        rank2 += 1
        rec2 &= all(_recurs_within(f.perm, k, 4) for k in range(4))
    rec2 &= rank2 == 24

    rng = random.Random(20240611)
    rec3 = True
    samples = 10_000
    for _ in range(samples):
        perm = list(range(8))
        rng.shuffle(perm)
        f = PermutationFlow(perm)
        rec3 &= all(_recurs_within(f.perm, k, 8) for k in range(8))

    cons = True
    for r in range(1, 6):
        count = 0
        for sp in itertools.permutations(range(1, r + 1)):
            f = PermutationFlow.from_sites(sp)
            count += 1
            cons &= all(bin(f(k)).count("1") == bin(k).count("1") == signality(f(k)) for k in range(1 << r))
        cons &= count == [1, 2, 6, 24, 120][r - 1]

    c2, c3 = count_dynamics(2), count_dynamics(3)
    counts = c2.all_maps == 256 == (2**2) ** (2**2) and c3.all_maps == 16_777_216 == (2**3) ** (2**3)

    ok = criterion(10, "isometry, recurrence (24 at r=2, 10^4 at r=3), signality conservation r<=5, dynamics counts",
                   iso and rec2 and rec3 and cons and counts,
                   f"iso={iso} rec2={rec2} rec3={rec3} signality={cons} counts={counts}")
    assert ok

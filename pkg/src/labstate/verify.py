"""Self-checks against the published numbers, grouped the way ``labstate verify`` runs them."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Callable, NamedTuple

import numpy as np

from . import bits
from .amplitude import Amp
from .bits import ABAR, BASIC_OPS, P0, P1, A, Z, bracket, compose, enumerate_bitops
from .network import Bomb, ev_final_state, ev_scenario, hardy_scenario, run_ev, run_hardy, stockpile_yield
from .quantum import Labstate, check_isometry, equal_up_to_phase, monomials_of
from .register import PermutationFlow, count_dynamics, orbit_period, signality

__all__ = ["Check", "GROUPS", "run_group", "TABLE_2", "QUBIT_TO_BIT"]


class Check(NamedTuple):
    name: str
    passed: bool
    detail: str = ""


F = Fraction

TABLE_2 = [
    [P0, Z, A, Z],
    [Z, P1, Z, ABAR],
    [Z, A, Z, P0],
    [ABAR, Z, P1, Z],
]

QUBIT_TO_BIT = {"p0": P0, "p1": P1, "a": A, "a+": ABAR, "0": Z}


def _check(name, cond, detail=""):
    return Check(name, bool(cond), "" if cond else detail)


def check_bitops() -> list[Check]:
    out = []
    ops = enumerate_bitops()
    opset = set(ops)
    out.append(_check("256 distinct bit operators", len(ops) == 256 and len(opset) == 256,
                      f"got {len(ops)} ops, {len(opset)} distinct"))
    out.append(_check("named operators present", set(bits.NAMED_OPS.values()) <= opset))
    closed = all(compose(o2, o1) in opset for o2 in ops for o1 in ops)
    out.append(_check("closed under composition", closed))
    mats = np.stack([o.matrix() for o in ops])
    codes = np.array([o.code for o in ops])
    prods = np.einsum("aij,bjk->abik", mats, mats)
    comp = np.array([[compose(o2, o1).code for o1 in ops] for o2 in ops])
    hom = np.array_equal(prods, mats[comp]) and np.array_equal(codes, np.arange(256))
    out.append(_check("[O2 O1] = [O2][O1] for all 65536 pairs", hom))
    got = bits.product_table(BASIC_OPS)
    mismatches = [(r, c) for r in range(4) for c in range(4) if got[r][c] != TABLE_2[r][c]]
    out.append(_check("product table of P0, P1, A, Abar (16 entries)", not mismatches,
                      f"mismatched cells {mismatches}"))
    qubit = bits.qubit_product_table()
    iso = [(r, c) for r in range(4) for c in range(4) if QUBIT_TO_BIT[qubit[r][c]] != got[r][c]]
    out.append(_check("isomorphic to the qubit table with Z as zero", not iso, f"cells {iso}"))
    br = all(bracket(i, j) == int(i == j) for i in range(4) for j in range(4))
    out.append(_check("(i|j) = delta_ij for all 16 pairs", br))
    laws = (
        compose(P0, P0) == P0 and compose(P1, P1) == P1
        and compose(bits.D, bits.D) == bits.D and compose(bits.C, bits.C) == bits.C
        and compose(A, A) == Z and compose(ABAR, ABAR) == Z
        and compose(P0, P1) == Z and compose(P1, P0) == Z
    )
    out.append(_check("idempotent and nilpotent laws", laws))
    return out


EV_DUD = {"Explode": F(0), "D6": F(1), "D7": F(0)}
EV_ACTIVE = {"Explode": F(1, 2), "D6": F(1, 4), "D7": F(1, 4)}


def check_ev() -> list[Check]:
    out = []
    dud = run_ev(Bomb.DUD)
    out.append(_check("dud: P(Explode)=0, P(D6)=1, P(D7)=0", dud == EV_DUD, str(dud)))
    sites = range(1, 8)
    target = Labstate.from_terms([(1, [("A", 6)])], sites)
    out.append(_check("dud final state is Abar6|0) up to phase",
                      equal_up_to_phase(target, ev_final_state(Bomb.DUD))))
    act = run_ev(Bomb.ACTIVE)
    out.append(_check("active: P(Explode)=1/2, P(D6)=P(D7)=1/4", act == EV_ACTIVE, str(act)))
    for w in (F(0), F(1, 2), F(1)):
        p = run_ev(w)
        ok = p["D6"] == w / 4 + (1 - w) and p["D7"] == w / 4
        out.append(_check(f"mixture omega_A={w}: P(D6)=w/4+(1-w), P(D7)=w/4", ok, str(p)))
    ys = [stockpile_yield(n) for n in range(1, 12)]
    out.append(_check("stockpile: one sweep finds 1/4", ys[0] == F(1, 4), str(ys[0])))
    out.append(_check("stockpile: limit 1/3", stockpile_yield() == F(1, 3), str(stockpile_yield())))
    out.append(_check("stockpile: partial sums increase toward 1/3",
                      all(a < b < F(1, 3) for a, b in zip(ys, ys[1:]))))
    for bomb in Bomb:
        sc = ev_scenario(bomb)
        states = sc.run()
        iso = all(check_isometry(m) and check_isometry(m, monomials_of(s, m))
                  for m, s in zip(sc.stages, states))
        out.append(_check(f"{bomb.value}: every stage map is an isometry", iso))
    return out


HARDY = {"6,8": F(1, 16), "7,8": F(1, 16), "7,9": F(1, 16), "6,9": F(9, 16), "Annihilation": F(1, 4)}


def hardy_psi2() -> Labstate:
    terms = [
        (F(2, 4), [("D", 3), ("D", 4)]),
        (Amp(0, F(1, 4)), [("A", 6), ("A", 8)]),
        (F(-1, 4), [("A", 7), ("A", 8)]),
        (F(-3, 4), [("A", 6), ("A", 9)]),
        (Amp(0, F(1, 4)), [("A", 7), ("A", 9)]),
    ]
    return Labstate.from_terms(terms, range(1, 10))


def check_hardy() -> list[Check]:
    out = []
    p = run_hardy()
    for k, v in HARDY.items():
        out.append(_check(f"P({k}) = {v}", p[k] == v, f"got {p[k]}"))
    out.append(_check("outcome probabilities sum to 1", sum(p.values()) == 1, str(sum(p.values()))))
    out.append(_check("P(7,8) != 0", p["7,8"] != 0))
    sc = hardy_scenario()
    states = sc.run()
    out.append(_check("|Psi,2) coefficients match exactly", states[2] == hardy_psi2()))
    iso = all(check_isometry(m) and check_isometry(m, monomials_of(s, m))
              for m, s in zip(sc.stages, states))
    out.append(_check("every stage map is an isometry", iso))
    out.append(_check("invariant under swapping electron and positron arms", run_hardy(swap_arms=True) == p))
    return out


def check_flows(samples: int = 10_000, seed: int = 0) -> list[Check]:
    out = []
    ok = True
    for perm in itertools.permutations(range(4)):
        f = PermutationFlow(perm)
        ok &= all(orbit_period(f, k) <= 4 for k in range(4))
    out.append(_check("rank 2: all 24 flows recur within 4 steps", ok))
    rng = random.Random(seed)
    ok = True
    for _ in range(samples):
        perm = list(range(8))
        rng.shuffle(perm)
        f = PermutationFlow(perm)
        for k in range(8):
            x, steps = f(k), 1
            while x != k and steps <= 8:
                x, steps = f(x), steps + 1
            ok &= x == k and steps <= 8
    out.append(_check(f"rank 3: {samples} sampled flows recur within 8 steps", ok))
    ok = True
    for r in range(1, 6):
        for sp in itertools.permutations(range(1, r + 1)):
            f = PermutationFlow.from_sites(sp)
            ok &= all(signality(f(k)) == signality(k) for k in range(1 << r))
    out.append(_check("signal permutation flows conserve signality (r <= 5)", ok))
    c2, c3 = count_dynamics(2), count_dynamics(3)
    out.append(_check("(2^r)^(2^r): 256 at r=2, 16777216 at r=3",
                      c2.all_maps == 256 and c3.all_maps == 16_777_216, f"{c2}, {c3}"))
    out.append(_check("rank 2: 24 permutation flows, 2 signal flows",
                      (c2.permutation_flows, c2.signal_flows) == (24, 2)))
    return out


GROUPS: dict[str, Callable[[], list[Check]]] = {
    "bitops": check_bitops,
    "ev": check_ev,
    "hardy": check_hardy,
    "flows": check_flows,
}


def run_group(name: str) -> list[Check]:
    return GROUPS[name]()

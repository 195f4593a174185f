from fractions import Fraction as F

import pytest

from labstate.amplitude import I, INV_R2, ONE
from labstate.errors import WiringError
from labstate.network import (
    HARDY_ARM_SWAP,
    AnnihilationVertex,
    Beamsplitter,
    Bomb,
    BombCoupled,
    Mirror,
    Network,
    PairSource,
    compile_network,
    ev_network,
    ev_scenario,
    hardy_network,
    hardy_scenario,
    relabel_network,
    run_ev,
    run_hardy,
    stockpile_yield,
)
from labstate.quantum import Labstate, StageMap, check_isometry, stage_apply
from labstate.register import RegisterState, as_site


def _rule(smap, *sites):
    return list(smap.rules[frozenset(as_site(s) for s in sites)])


def _gens(*pairs):
    return tuple((k, as_site(s)) for k, s in pairs)


def test_ev_stage_one_is_the_beamsplitter():
    split = compile_network(ev_network(Bomb.DUD))[0]
    assert _rule(split, 1) == [(I * INV_R2, _gens(("A", 2))), (-INV_R2, _gens(("A", 3)))]


def test_ev_mirrors_reflect_with_minus_sign():
    mirrors = compile_network(ev_network(Bomb.DUD))[1]
    assert _rule(mirrors, 2) == [(-ONE, _gens(("A", 5)))]
    assert _rule(mirrors, 3) == [(-ONE, _gens(("A", 4)))]


def test_active_bomb_decommissions_its_detector():
    split = compile_network(ev_network(Bomb.ACTIVE))[0]
    assert _rule(split, 1) == [(I * INV_R2, _gens(("D", 2))), (-INV_R2, _gens(("A", 3)))]


def test_dud_is_no_component():
    assert not any(isinstance(c, BombCoupled) for c in ev_network(Bomb.DUD).components)


def test_hardy_vertex_joint_rule():
    recombine = compile_network(hardy_network())[1]
    assert _rule(recombine, 3, 4) == [(ONE, _gens(("D", 3), ("D", 4)))]


def test_hardy_pair_source():
    source = compile_network(hardy_network())[0]
    sites = range(1, 10)
    image = Labstate.from_terms(_rule(source, 1), sites)
    # (i A2 - A3)(i A5 - A4) / 2
    expected = Labstate.parse("(-1/2)*A2*A5 + (-i/2)*A2*A4 + (-i/2)*A3*A5 + (1/2)*A3*A4", sites)
    assert image == expected


def test_second_port_swaps_roles():
    bs = Beamsplitter(1, (4, 5), (6, 7))
    rules = bs.rules()
    assert [g for _, g in rules[4]] == [[("A", 6)], [("A", 7)]]
    assert [g for _, g in rules[5]] == [[("A", 7)], [("A", 6)]]


def test_run_ev():
    assert run_ev(Bomb.DUD) == {"Explode": 0, "D6": 1, "D7": 0}
    assert run_ev("active") == {"Explode": F(1, 2), "D6": F(1, 4), "D7": F(1, 4)}
    mixed = run_ev(F(1, 2))
    assert mixed == {"Explode": F(1, 4), "D6": F(5, 8), "D7": F(1, 8)}
    with pytest.raises(ValueError):
        run_ev(F(3, 2))


@pytest.mark.parametrize("w", [F(0), F(1, 5), F(1, 2), F(7, 9), F(1)])
def test_ev_mixture_formula(w):
    p = run_ev(w)
    assert p["D6"] == w / 4 + (1 - w)
    assert p["D7"] == w / 4
    assert p["Explode"] == w / 2


def test_detector_seven_only_from_active_bombs():
    assert run_ev(Bomb.DUD)["D7"] == 0
    assert run_ev(Bomb.ACTIVE)["D7"] > 0


def test_run_hardy():
    p = run_hardy()
    assert p == {"6,8": F(1, 16), "7,8": F(1, 16), "7,9": F(1, 16),
                 "Annihilation": F(1, 4), "6,9": F(9, 16)}


def test_hardy_arm_swap_is_a_relabelling():
    assert all(HARDY_ARM_SWAP[HARDY_ARM_SWAP[k]] == k for k in HARDY_ARM_SWAP)
    swapped = hardy_network(swap_arms=True)
    assert swapped != hardy_network()
    assert run_hardy(swap_arms=True) == run_hardy()
    # the relabelled network produces the relabelled state
    final = hardy_scenario().final_state()
    final_swapped = hardy_scenario(swap_arms=True).final_state()
    mapped = Labstate(
        ((RegisterState({as_site(HARDY_ARM_SWAP.get(s.id, s.id)): v for s, v in c.items()}), a)
         for c, a in final.terms.items()),
        final.sites,
    )
    assert mapped == final_swapped


def test_stockpile():
    assert stockpile_yield(1) == F(1, 4)
    assert stockpile_yield(2) == F(1, 4) + F(1, 4) * F(1, 4)
    assert stockpile_yield(2) == F(5, 16)
    assert stockpile_yield() == F(1, 3)
    ys = [stockpile_yield(n) for n in range(1, 25)]
    assert all(a < b < F(1, 3) for a, b in zip(ys, ys[1:]))
    with pytest.raises(ValueError):
        stockpile_yield(0)


def test_all_compiled_stages_are_isometries():
    for net in (ev_network(Bomb.DUD), ev_network(Bomb.ACTIVE), hardy_network(), hardy_network(True)):
        assert all(check_isometry(m) for m in compile_network(net))


# -- wiring errors ----------------------------------------------------------

def test_input_consumed_twice():
    net = Network([Mirror(1, 1, 2), Mirror(1, 1, 3)])
    with pytest.raises(WiringError):
        compile_network(net)


def test_feedback_into_earlier_stage():
    net = Network([Mirror(1, 1, 2), Mirror(2, 2, 1)])
    with pytest.raises(WiringError):
        compile_network(net)


def test_degenerate_vertex():
    with pytest.raises(WiringError):
        compile_network(Network([Mirror(1, 3, 5), AnnihilationVertex(1, (3, 3))]))


def test_overlapping_vertices():
    net = Network([Beamsplitter(1, (1, 2), (5, 6)), Beamsplitter(1, (3, 4), (7, 8)),
                   AnnihilationVertex(1, (1, 3)), AnnihilationVertex(1, (3, 4))])
    with pytest.raises(WiringError):
        compile_network(net)


def test_non_isometric_stage():
    # two mirrors into one detector: distinct inputs collide
    net = Network([Mirror(1, 1, 3), Mirror(1, 2, 3)])
    with pytest.raises(WiringError):
        compile_network(net)
    assert len(compile_network(net, check=False)) == 1


def test_relabel_keeps_unmapped():
    net = Network([Mirror(1, 1, 2), PairSource(2, 2, (3, 4), (5, 6))])
    moved = relabel_network(net, {2: 9})
    assert moved.components[0] == Mirror(1, 1, 9)
    assert moved.components[1].input == 9


def test_scenario_run_prefix():
    sc = ev_scenario(Bomb.DUD)
    states = sc.run()
    assert len(states) == 4
    assert sc.run(1) == states[:2]
    assert stage_apply(sc.stages[0], states[0]) == states[1]
    assert isinstance(sc.stages[0], StageMap)

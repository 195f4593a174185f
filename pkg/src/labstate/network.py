"""Optical networks compiled to stage maps, and the two interferometer experiments.

Phase conventions are fixed: transmission multiplies by ``i``, reflection by
``-1``, and each beamsplitter port carries a factor ``1/sqrt(2)``.  So a
signal entering beamsplitter port ``in`` becomes
``(i*A<transmit> - A<reflect>)/r2`` and a mirror sends ``A<in>`` to
``-A<out>``.

An active bomb on a detector turns any signal arriving there into a
decommissioned detector; a dud is simply absent.  An annihilation vertex on
a pair of detectors replaces the product of their single-signal rules by a
joint rule that decommissions both.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Mapping, Union

from .amplitude import I, INV_R2, ONE
from .errors import WiringError
from .quantum import (
    DensityState,
    Labstate,
    Projector,
    StageMap,
    check_isometry,
    density_probability,
    isometry_defects,
    probability,
    stage_apply,
)
from .register import as_site

__all__ = [
    "TRANSMIT",
    "REFLECT",
    "BS_FACTOR",
    "Beamsplitter",
    "Mirror",
    "PairSource",
    "BombCoupled",
    "AnnihilationVertex",
    "Network",
    "relabel_network",
    "compile_network",
    "Scenario",
    "Bomb",
    "ev_network",
    "ev_scenario",
    "ev_final_state",
    "run_ev",
    "hardy_network",
    "hardy_scenario",
    "run_hardy",
    "stockpile_yield",
]

TRANSMIT = I
REFLECT = -ONE
BS_FACTOR = INV_R2


@dataclass(frozen=True)
class Beamsplitter:
    """One or two input ports onto two outputs.

    Port ``inputs[0]`` transmits to ``outputs[0]`` and reflects to
    ``outputs[1]``; port ``inputs[1]`` (if present) transmits to
    ``outputs[1]`` and reflects to ``outputs[0]``.
    """

    stage: int
    inputs: tuple
    outputs: tuple

    def rules(self):
        t, r = self.outputs
        out = {}
        for port, (dt, dr) in zip(self.inputs, ((t, r), (r, t))):
            out[port] = [(BS_FACTOR * TRANSMIT, [("A", dt)]), (BS_FACTOR * REFLECT, [("A", dr)])]
        return out

    @property
    def sources(self):
        return tuple(self.inputs)

    @property
    def targets(self):
        return tuple(self.outputs)


@dataclass(frozen=True)
class Mirror:
    stage: int
    input: int
    output: int

    def rules(self):
        return {self.input: [(REFLECT, [("A", self.output)])]}

    @property
    def sources(self):
        return (self.input,)

    @property
    def targets(self):
        return (self.output,)


@dataclass(frozen=True)
class PairSource:
    """Emits two signals at once, each straight into its own beamsplitter port.

    ``first`` and ``second`` are ``(transmit, reflect)`` detector pairs.
    """

    stage: int
    input: int
    first: tuple
    second: tuple

    def rules(self):
        image = []
        for (a1, t1), (a2, t2) in _product(_port(*self.first), _port(*self.second)):
            image.append((a1 * a2, [t1, t2]))
        return {self.input: image}

    @property
    def sources(self):
        return (self.input,)

    @property
    def targets(self):
        return tuple(self.first) + tuple(self.second)


def _port(t, r):
    return [(BS_FACTOR * TRANSMIT, ("A", t)), (BS_FACTOR * REFLECT, ("A", r))]


def _product(xs, ys):
    return [(x, y) for x in xs for y in ys]


@dataclass(frozen=True)
class BombCoupled:
    """A bomb touching ``site``; when active, a signal there becomes debris."""

    stage: int
    site: int
    active: bool = True

    sources = ()
    targets = ()


@dataclass(frozen=True)
class AnnihilationVertex:
    """Joint rule: signals on both ``sites`` at once annihilate into two decommissioned detectors."""

    stage: int
    sites: tuple

    sources = ()
    targets = ()

    def joint_rule(self):
        a, b = self.sites
        return frozenset({as_site(a), as_site(b)}), [(ONE, [("D", a), ("D", b)])]


Component = Union[Beamsplitter, Mirror, PairSource, BombCoupled, AnnihilationVertex]


@dataclass
class Network:
    components: list = field(default_factory=list)
    name: str | None = None

    def stages(self) -> list[int]:
        return sorted({c.stage for c in self.components})


def _check_wiring(net: Network) -> None:
    consumed_by_stage: dict[int, set] = {}
    for n in net.stages():
        seen: dict = {}
        for c in net.components:
            if c.stage != n:
                continue
            for s in c.sources:
                if s in seen:
                    raise WiringError(f"stage {n}: detector {s} feeds both {seen[s]} and {c}")
                seen[s] = c
        consumed_by_stage[n] = set(seen)
    for n in net.stages():
        earlier = set().union(*(v for m, v in consumed_by_stage.items() if m <= n))
        for c in net.components:
            if c.stage == n:
                loop = set(c.targets) & earlier
                if loop:
                    raise WiringError(f"stage {n}: {c} feeds detectors {sorted(loop)} back into a stage already run")
    for c in net.components:
        if isinstance(c, AnnihilationVertex) and len(set(c.sites)) != 2:
            raise WiringError(f"{c} needs two distinct detectors")
    by_stage: dict[int, list] = {}
    for c in net.components:
        if isinstance(c, AnnihilationVertex):
            for other in by_stage.setdefault(c.stage, []):
                if set(other.sites) & set(c.sites):
                    raise WiringError(f"annihilation vertices {other} and {c} overlap")
            by_stage[c.stage].append(c)


def relabel_network(net: Network, mapping: Mapping[int, int]) -> Network:
    """Rename detectors; unmapped detectors keep their labels."""
    f = lambda s: mapping.get(s, s)  # noqa: E731
    comps = []
    for c in net.components:
        if isinstance(c, Beamsplitter):
            c = replace(c, inputs=tuple(map(f, c.inputs)), outputs=tuple(map(f, c.outputs)))
        elif isinstance(c, Mirror):
            c = replace(c, input=f(c.input), output=f(c.output))
        elif isinstance(c, PairSource):
            c = replace(c, input=f(c.input), first=tuple(map(f, c.first)), second=tuple(map(f, c.second)))
        elif isinstance(c, BombCoupled):
            c = replace(c, site=f(c.site))
        elif isinstance(c, AnnihilationVertex):
            c = replace(c, sites=tuple(map(f, c.sites)))
        comps.append(c)
    return Network(comps, name=net.name)


def compile_network(net: Network, check: bool = True) -> list[StageMap]:
    """One :class:`StageMap` per stage, in stage order."""
    _check_wiring(net)
    maps = []
    for n in net.stages():
        comps = [c for c in net.components if c.stage == n]
        bombs = {as_site(c.site) for c in comps if isinstance(c, BombCoupled) and c.active}
        rules: dict = {}
        for c in comps:
            if isinstance(c, (BombCoupled, AnnihilationVertex)):
                continue
            for src, image in c.rules().items():
                rules[(src,)] = [
                    (a, [("D", s) if k == "A" and as_site(s) in bombs else (k, s) for k, s in gens])
                    for a, gens in image
                ]
        for c in comps:
            if isinstance(c, AnnihilationVertex):
                key, image = c.joint_rule()
                rules[tuple(sorted(key))] = image
        smap = StageMap(rules, name=f"{net.name or 'stage'}{n}")
        if check and not check_isometry(smap):
            raise WiringError(f"stage {n} is not an isometry: {isometry_defects(smap)[:3]}")
        maps.append(smap)
    return maps


@dataclass
class Scenario:
    """Declared detectors, initial labstate, stages, and named outcome projectors."""

    sites: tuple
    initial: Labstate
    stages: list
    outcomes: dict
    name: str | None = None

    def __post_init__(self):
        self.sites = tuple(sorted(as_site(s) for s in self.sites))

    def __eq__(self, other):
        if not isinstance(other, Scenario):
            return NotImplemented
        return (
            self.sites == other.sites
            and self.initial == other.initial
            and self.stages == other.stages
            and list(self.outcomes) == list(other.outcomes)
            and all(_same_projector(self.outcomes[k], other.outcomes[k]) for k in self.outcomes)
        )

    def run(self, upto: int | None = None) -> list[Labstate]:
        """Labstates after each stage; element 0 is the initial state."""
        states = [self.initial]
        stages = self.stages if upto is None else self.stages[:upto]
        for smap in stages:
            states.append(stage_apply(smap, states[-1]))
        return states

    def final_state(self, upto: int | None = None) -> Labstate:
        return self.run(upto)[-1]

    def probabilities(self, state: Labstate | None = None) -> dict[str, Fraction]:
        if state is None:
            state = self.final_state()
        return {name: probability(state, p) for name, p in self.outcomes.items()}


def _same_projector(p: Projector, q: Projector) -> bool:
    return p.conditions() == q.conditions()


# ---------------------------------------------------------------------------
# Elitzur-Vaidman bomb tester

class Bomb(Enum):
    ACTIVE = "active"
    DUD = "dud"


EV_SITES = tuple(range(1, 8))


def ev_network(bomb: Bomb) -> Network:
    comps = [
        Beamsplitter(1, (1,), (2, 3)),
        Mirror(2, 2, 5),
        Mirror(2, 3, 4),
        Beamsplitter(3, (4, 5), (6, 7)),
    ]
    if bomb is Bomb.ACTIVE:
        comps.append(BombCoupled(1, 2, active=True))
    return Network(comps, name="ev")


def ev_outcomes() -> dict[str, Projector]:
    return {
        "Explode": Projector(faulty=[2], no_other_signal=True, name="Explode"),
        "D6": Projector(signal=[6], name="D6"),
        "D7": Projector(signal=[7], name="D7"),
    }


def ev_scenario(bomb: Bomb) -> Scenario:
    gens = [("A", 1)] + ([("D", 2)] if bomb is Bomb.ACTIVE else [])
    init = Labstate.from_terms([(ONE, gens)], EV_SITES)
    return Scenario(EV_SITES, init, compile_network(ev_network(bomb)), ev_outcomes(), name=f"ev-{bomb.value}")


def ev_final_state(bomb: Bomb) -> Labstate:
    return ev_scenario(bomb).final_state()


def ev_density(omega_active, stage: int = 3) -> DensityState:
    w = Fraction(omega_active)
    return DensityState([
        (w, ev_scenario(Bomb.ACTIVE).final_state(stage)),
        (1 - w, ev_scenario(Bomb.DUD).final_state(stage)),
    ])


def run_ev(bomb: Bomb | object = Bomb.ACTIVE) -> dict[str, Fraction]:
    """Exact outcome probabilities after the last stage.

    ``bomb`` is :class:`Bomb` for a known bomb, or a number ``omega_A`` for a
    stockpile in which that fraction of bombs is active.
    """
    if isinstance(bomb, str):
        bomb = Bomb(bomb.lower())
    if isinstance(bomb, Bomb):
        return ev_scenario(bomb).probabilities()
    if not 0 <= Fraction(bomb) <= 1:
        raise ValueError(f"active fraction must lie in [0, 1], got {bomb}")
    rho = ev_density(bomb)
    return {name: density_probability(rho, p) for name, p in ev_outcomes().items()}


def stockpile_yield(sweeps: int | None = None) -> Fraction:
    """Fraction of active bombs certified intact after repeated sweeps.

    Each sweep keeps the bombs flagged by detector 7 and retests those that
    landed on detector 6; ``sweeps=None`` gives the limit of infinitely many.
    """
    p = run_ev(Bomb.ACTIVE)
    found, retest = p["D7"], p["D6"]
    if sweeps is None:
        return found / (1 - retest)
    if sweeps < 1:
        raise ValueError("need at least one sweep")
    return sum((found * retest ** (n - 1) for n in range(1, sweeps + 1)), Fraction(0))


# ---------------------------------------------------------------------------
# Hardy paradox

HARDY_SITES = tuple(range(1, 10))


# exchanges electron and positron: inner arms 3<->4, outer arms 2<->5, exits 6<->9, 7<->8
HARDY_ARM_SWAP = {2: 5, 5: 2, 3: 4, 4: 3, 6: 9, 9: 6, 7: 8, 8: 7}


def hardy_network(swap_arms: bool = False) -> Network:
    """Electron and positron Mach-Zehnder arms coupled by annihilation at (3, 4).

    With ``swap_arms`` every detector is relabelled by :data:`HARDY_ARM_SWAP`.
    """
    net = Network([
        PairSource(1, 1, (2, 3), (5, 4)),
        Beamsplitter(2, (2, 3), (7, 6)),
        Beamsplitter(2, (4, 5), (9, 8)),
        AnnihilationVertex(2, (3, 4)),
    ], name="hardy")
    return relabel_network(net, HARDY_ARM_SWAP) if swap_arms else net


def hardy_outcomes() -> dict[str, Projector]:
    out = {}
    for a, b in ((6, 8), (7, 8), (7, 9)):
        out[f"{a},{b}"] = Projector(signal=[a, b], name=f"{a},{b}")
    out["Annihilation"] = Projector(faulty=[3, 4], no_other_signal=True, name="Annihilation")
    out["6,9"] = Projector(signal=[6, 9], name="6,9")
    return out


def hardy_scenario(swap_arms: bool = False) -> Scenario:
    init = Labstate.from_terms([(ONE, [("A", 1)])], HARDY_SITES)
    return Scenario(HARDY_SITES, init, compile_network(hardy_network(swap_arms)), hardy_outcomes(), name="hardy")


def run_hardy(swap_arms: bool = False) -> dict[str, Fraction]:
    return hardy_scenario(swap_arms).probabilities()

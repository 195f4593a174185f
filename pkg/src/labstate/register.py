"""Classical register states and deterministic register dynamics.

A register state assigns a :class:`~labstate.bits.PBitState` to every site of
the (conceptually infinite) universal register.  Only finitely many sites are
ever non-empty, so a state is stored as a finite map with empty sites
omitted; the void is the empty map.

Once a set of ``r`` normal detectors is fixed (a :class:`PhysicalRegister`),
its ``2**r`` ground/signal configurations are indexed by integers: the
``j``-th site carries bit weight ``2**(j-1)``.  Occupancy strings list the
sites left to right, so ``|011)`` on a rank-3 register is ``k = 2 + 4 = 6``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .bits import ABAR, C, EMPTY, GROUND, SIGNAL, BitOp, PBitState
from .errors import LabstateError, NonNormalState

__all__ = [
    "Site",
    "as_site",
    "RegisterState",
    "VOID",
    "construct",
    "contextual_vacuum",
    "multi_observer_vacuum",
    "observers",
    "observers_disjoint",
    "apply_site_op",
    "bracket_states",
    "PhysicalRegister",
    "parse_occupancy",
    "format_occupancy",
    "signality",
    "signal_class_size",
    "signal_class",
    "PermutationFlow",
    "parse_cycles",
    "format_cycles",
    "flow_step",
    "cycle_analysis",
    "orbit_period",
    "DynamicsCount",
    "count_dynamics",
    "ClassicalObservable",
    "ClassicalMixture",
    "expectation",
    "mixture_expectation",
    "trace_expectation",
    "evolve_mixture",
    "check_semiunitary",
    "evolution_matrix",
]


@dataclass(frozen=True, order=True)
class Site:
    """A detector label; ``observer`` separates the registers of different observers."""

    id: int
    observer: int = 0

    def __post_init__(self):
        if self.id < 0:
            raise ValueError(f"site id must be non-negative, got {self.id}")

    def __str__(self):
        return str(self.id) if self.observer == 0 else f"{self.id}^{self.observer}"


def as_site(x) -> Site:
    if isinstance(x, Site):
        return x
    if isinstance(x, tuple):
        return Site(*x)
    return Site(int(x))


class RegisterState:
    """Finite-support assignment of detector states, canonical without empties."""

    __slots__ = ("_map", "_hash")

    def __init__(self, assignment: Mapping | Iterable = ()):
        items = assignment.items() if isinstance(assignment, Mapping) else assignment
        m = {}
        for s, v in items:
            v = PBitState(v)
            if v is not EMPTY:
                m[as_site(s)] = v
        object.__setattr__(self, "_map", m)
        object.__setattr__(self, "_hash", hash(frozenset(m.items())))

    def __setattr__(self, key, value):
        raise AttributeError("RegisterState is immutable")

    def __getitem__(self, site) -> PBitState:
        return self._map.get(as_site(site), EMPTY)

    get = __getitem__

    def items(self):
        return sorted(self._map.items())

    def sites(self) -> list[Site]:
        return sorted(self._map)

    def sites_in(self, state) -> list[Site]:
        state = PBitState(state)
        return sorted(s for s, v in self._map.items() if v is state)

    def replace(self, updates: Mapping) -> "RegisterState":
        m = dict(self._map)
        for s, v in updates.items():
            m[as_site(s)] = PBitState(v)
        return RegisterState(m)

    def __len__(self):
        return len(self._map)

    def __eq__(self, other):
        if not isinstance(other, RegisterState):
            return NotImplemented
        return self._map == other._map

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.items() < other.items()

    def __repr__(self):
        if not self._map:
            return "RegisterState(void)"
        body = ", ".join(f"{s}:{v.name[0]}" for s, v in self.items())
        return f"RegisterState({body})"


VOID = RegisterState()


def apply_site_op(op: BitOp, site, state: RegisterState) -> RegisterState:
    """Apply ``op`` at one site; every other site is untouched."""
    site = as_site(site)
    return state.replace({site: op(state[site])})


def construct(state: RegisterState, sites: Iterable) -> RegisterState:
    """Build (or reset, or repair) a ground-state detector at each listed site."""
    for s in sites:
        state = apply_site_op(C, s, state)
    return state


def contextual_vacuum(r: int, observer: int = 0, start: int = 1) -> RegisterState:
    """Rank-``r`` ground state on sites ``start .. start + r - 1``."""
    return construct(VOID, (Site(i, observer) for i in range(start, start + r)))


def multi_observer_vacuum(ranks: Mapping[int, int]) -> RegisterState:
    """Joint ground state of several observers, ``{observer: rank}``."""
    state = VOID
    for obs, r in ranks.items():
        state = construct(state, (Site(i, obs) for i in range(1, r + 1)))
    return state


def observers(state: RegisterState) -> dict[int, list[int]]:
    """Non-empty site ids grouped by observer tag."""
    out: dict[int, list[int]] = {}
    for s in state.sites():
        out.setdefault(s.observer, []).append(s.id)
    return out


def observers_disjoint(*site_groups: Iterable) -> bool:
    seen: set[Site] = set()
    for group in site_groups:
        group = {as_site(s) for s in group}
        if seen & group:
            return False
        seen |= group
    return True


def bracket_states(a: RegisterState, b: RegisterState) -> int:
    """``(a|b)``: the product of site-wise Kronecker deltas."""
    return int(a == b)


# ---------------------------------------------------------------------------
# physical registers and the computational basis

class PhysicalRegister:
    """An ordered list of ``r`` normal detectors with basis ``|k)``, ``0 <= k < 2**r``."""

    def __init__(self, sites: Sequence):
        sites = [as_site(s) for s in sites]
        if not sites:
            raise ValueError("a physical register needs rank >= 1")
        if len(set(sites)) != len(sites):
            raise ValueError("duplicate site in register")
        self.sites = tuple(sites)

    @classmethod
    def of_rank(cls, r: int, observer: int = 0) -> "PhysicalRegister":
        return cls([Site(i, observer) for i in range(1, r + 1)])

    @property
    def rank(self) -> int:
        return len(self.sites)

    @property
    def dim(self) -> int:
        return 1 << self.rank

    def basis_state(self, k: int, base: RegisterState = VOID) -> RegisterState:
        if not 0 <= k < self.dim:
            raise ValueError(f"basis index {k} out of range for rank {self.rank}")
        return base.replace(
            {s: SIGNAL if (k >> j) & 1 else GROUND for j, s in enumerate(self.sites)}
        )

    def index_of(self, state: RegisterState) -> int:
        k = 0
        for j, s in enumerate(self.sites):
            v = state[s]
            if not v.is_normal():
                raise NonNormalState(f"site {s} is {v.name.lower()}")
            k |= int(v) << j
        return k

    def creation(self, sites: Iterable, base: RegisterState | None = None) -> RegisterState:
        """Apply signal creation at each listed site to the register's ground state."""
        state = base if base is not None else self.basis_state(0)
        for s in sites:
            state = apply_site_op(ABAR, s, state)
        return state

    def __repr__(self):
        return f"PhysicalRegister({[str(s) for s in self.sites]})"


_OCC = re.compile(r"^\|([01]+)\)$")


def parse_occupancy(text: str) -> int:
    """``'|00101101)'`` -> basis index (leftmost digit is site 1)."""
    m = _OCC.match(text.strip())
    if m is None:
        raise ValueError(f"not an occupancy string: {text!r}")
    return sum(int(c) << j for j, c in enumerate(m.group(1)))


def format_occupancy(k: int, r: int) -> str:
    if not 0 <= k < 1 << r:
        raise ValueError(f"basis index {k} out of range for rank {r}")
    return "|" + "".join(str((k >> j) & 1) for j in range(r)) + ")"


def signality(state, register: PhysicalRegister | None = None) -> int:
    """Number of signal-state detectors.

    Accepts a basis index, an occupancy string, or a :class:`RegisterState`.
    For register states every site considered (the given register's, or all
    non-empty ones) must be normal.
    """
    if isinstance(state, str):
        state = parse_occupancy(state)
    if isinstance(state, (int, np.integer)):
        return int(state).bit_count()
    if register is not None:
        return signality(register.index_of(state))
    count = 0
    for s, v in state.items():
        if not v.is_normal():
            raise NonNormalState(f"site {s} is {v.name.lower()}")
        count += v is SIGNAL
    return count


def signal_class_size(r: int, d: int) -> int:
    if not 0 <= d <= r:
        raise ValueError(f"signality {d} out of range for rank {r}")
    return math.comb(r, d)


def signal_class(r: int, d: int) -> list[int]:
    """Basis indices of the rank-``r`` states with signality ``d``."""
    signal_class_size(r, d)
    return [k for k in range(1 << r) if signality(k) == d]


# ---------------------------------------------------------------------------
# permutation flows

class PermutationFlow:
    """Reversible one-step dynamics on the ``2**r`` basis states of a register.

    Build one either from an explicit state permutation
    (:meth:`from_states`, :meth:`from_cycles`) or from a permutation of the
    ``r`` sites (:meth:`from_sites`), which moves signals between detectors
    and so conserves signality.
    """

    def __init__(self, perm: Sequence[int], site_perm: Sequence[int] | None = None):
        perm = tuple(int(x) for x in perm)
        n = len(perm)
        if n == 0 or n & (n - 1):
            raise ValueError(f"state permutation length must be a power of two, got {n}")
        if sorted(perm) != list(range(n)):
            raise ValueError(f"not a bijection on 0..{n - 1}: {perm}")
        self.perm = perm
        self.rank = n.bit_length() - 1
        self.site_perm = tuple(site_perm) if site_perm is not None else None

    @classmethod
    def from_states(cls, images: Sequence[int]) -> "PermutationFlow":
        return cls(images)

    @classmethod
    def from_cycles(cls, text: str, r: int) -> "PermutationFlow":
        return cls(parse_cycles(text, 1 << r))

    @classmethod
    def identity(cls, r: int) -> "PermutationFlow":
        return cls(range(1 << r))

    @classmethod
    def full_cycle(cls, r: int) -> "PermutationFlow":
        n = 1 << r
        return cls([(k + 1) % n for k in range(n)])

    @classmethod
    def from_sites(cls, site_perm: Sequence[int]) -> "PermutationFlow":
        """Signal permutation dynamics: new occupancy of site j is the old occupancy of site ``site_perm[j-1]``.

        ``site_perm`` lists the images of ``1..r`` (1-based).
        """
        sp = tuple(int(x) for x in site_perm)
        r = len(sp)
        if sorted(sp) != list(range(1, r + 1)):
            raise ValueError(f"not a bijection on 1..{r}: {sp}")
        perm = []
        for k in range(1 << r):
            new = 0
            for j in range(r):
                new |= ((k >> (sp[j] - 1)) & 1) << j
            perm.append(new)
        return cls(perm, site_perm=sp)

    def __call__(self, k: int) -> int:
        return self.perm[k]

    def inverse(self) -> "PermutationFlow":
        inv = [0] * len(self.perm)
        for k, v in enumerate(self.perm):
            inv[v] = k
        sp = None
        if self.site_perm is not None:
            spi = [0] * len(self.site_perm)
            for j, v in enumerate(self.site_perm, start=1):
                spi[v - 1] = j
            sp = spi
        return PermutationFlow(inv, site_perm=sp)

    def then(self, other: "PermutationFlow") -> "PermutationFlow":
        """One step of ``self`` followed by one step of ``other``."""
        if other.rank != self.rank:
            raise ValueError("flows act on registers of different rank")
        return PermutationFlow([other.perm[v] for v in self.perm])

    def order(self) -> int:
        return math.lcm(*(len(c) for c in cycle_analysis(self)))

    def __eq__(self, other):
        if not isinstance(other, PermutationFlow):
            return NotImplemented
        return self.perm == other.perm

    def __hash__(self):
        return hash(self.perm)

    def __repr__(self):
        return f"PermutationFlow({format_cycles(self.perm)}, rank={self.rank})"


def parse_cycles(text: str, n: int) -> tuple[int, ...]:
    """Cycle notation ``(0 1 3)(2)`` to an image list on ``0..n-1``.

    ``(a b c)`` sends a to b, b to c and c to a; unlisted points are fixed.
    """
    text = text.strip()
    if not re.fullmatch(r"(\(\s*\d+(?:[\s,]+\d+)*\s*\)\s*)*", text):
        raise ValueError(f"malformed cycle notation: {text!r}")
    image = list(range(n))
    seen: set[int] = set()
    for body in re.findall(r"\(([^)]*)\)", text):
        cyc = [int(x) for x in re.split(r"[\s,]+", body.strip())]
        for x in cyc:
            if not 0 <= x < n:
                raise ValueError(f"point {x} outside 0..{n - 1}")
            if x in seen:
                raise ValueError(f"point {x} appears in more than one cycle")
            seen.add(x)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            image[a] = b
    return tuple(image)


def format_cycles(perm: Sequence[int]) -> str:
    return "".join("(" + " ".join(map(str, c)) + ")" for c in _cycles(perm))


def _cycles(perm: Sequence[int]) -> list[tuple[int, ...]]:
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = []
        k = start
        while not seen[k]:
            seen[k] = True
            cyc.append(k)
            k = perm[k]
        out.append(tuple(cyc))
    return out


def flow_step(flow: PermutationFlow, k: int) -> int:
    if not 0 <= k < len(flow.perm):
        raise ValueError(f"basis index {k} out of range for rank {flow.rank}")
    return flow.perm[k]


def cycle_analysis(flow: PermutationFlow | Sequence[int]) -> list[tuple[int, ...]]:
    """Disjoint cycles, each listed from its smallest point; a cycle's period is its length."""
    perm = flow.perm if isinstance(flow, PermutationFlow) else tuple(flow)
    return _cycles(perm)


def orbit_period(flow: PermutationFlow, k: int) -> int:
    """Steps until ``k`` first returns to itself, by following the orbit."""
    steps, x = 1, flow.perm[k]
    while x != k:
        x = flow.perm[x]
        steps += 1
    return steps


class DynamicsCount(NamedTuple):
    all_maps: int
    permutation_flows: int
    signal_flows: int


def count_dynamics(r: int) -> DynamicsCount:
    """How many autonomous one-step dynamics a rank-``r`` register admits."""
    n = 1 << r
    return DynamicsCount(n**n, math.factorial(n), math.factorial(r))


# ---------------------------------------------------------------------------
# observables and mixtures

class ClassicalObservable:
    """Diagonal observable ``sum_k |k) X_k (k|`` on a rank-``r`` register."""

    def __init__(self, weights: Mapping[int, object] | Sequence, r: int):
        if not isinstance(weights, Mapping):
            weights = dict(enumerate(weights))
        self.rank = r
        missing = [k for k in range(1 << r) if k not in weights]
        if missing:
            raise ValueError(f"observable undefined on basis states {missing}")
        extra = [k for k in weights if not 0 <= k < 1 << r]
        if extra:
            raise ValueError(f"basis indices {extra} outside the register")
        self.weights = {k: Fraction(weights[k]) for k in range(1 << r)}

    def matrix(self) -> np.ndarray:
        m = np.full((1 << self.rank, 1 << self.rank), Fraction(0), dtype=object)
        for k, x in self.weights.items():
            m[k, k] = x
        return m


class ClassicalMixture:
    """Probability ``omega_k`` of starting a run in basis state ``|k)``."""

    def __init__(self, weights: Mapping[int, object] | Sequence, r: int):
        if not isinstance(weights, Mapping):
            weights = dict(enumerate(weights))
        self.rank = r
        w = {int(k): Fraction(v) for k, v in weights.items() if Fraction(v) != 0}
        if any(v < 0 for v in w.values()):
            raise ValueError("mixture weights must be non-negative")
        if sum(w.values()) != 1:
            raise ValueError(f"mixture weights sum to {sum(w.values())}, not 1")
        if any(not 0 <= k < 1 << r for k in w):
            raise ValueError("mixture weight on a basis index outside the register")
        self.weights = w

    @classmethod
    def uniform(cls, r: int) -> "ClassicalMixture":
        n = 1 << r
        return cls({k: Fraction(1, n) for k in range(n)}, r)

    def density_matrix(self) -> np.ndarray:
        n = 1 << self.rank
        rho = np.full((n, n), Fraction(0), dtype=object)
        for k, w in self.weights.items():
            e = np.zeros(n, dtype=object)
            e[k] = 1
            rho = rho + w * np.outer(e, e)
        return rho


def expectation(obs: ClassicalObservable, k: int) -> Fraction:
    """``(k| X |k)`` for a single basis state: the dyadic sum picks out ``X_k``."""
    if k not in obs.weights:
        raise ValueError(f"basis index {k} outside the register")
    # (k|j) X_j (j|k) summed over j
    return sum((x * (j == k) * (j == k) for j, x in obs.weights.items()), Fraction(0))


def mixture_expectation(obs: ClassicalObservable, mix: ClassicalMixture) -> Fraction:
    if obs.rank != mix.rank:
        raise LabstateError("observable and mixture live on different registers")
    return sum((w * obs.weights[k] for k, w in mix.weights.items()), Fraction(0))


def trace_expectation(obs: ClassicalObservable, rho) -> Fraction:
    """``Tr(X rho)`` with exact entries; ``rho`` may be a mixture or a matrix."""
    if isinstance(rho, ClassicalMixture):
        rho = rho.density_matrix()
    prod = obs.matrix().dot(rho)
    return sum((prod[k, k] for k in range(prod.shape[0])), Fraction(0))


def evolve_mixture(mix: ClassicalMixture, flow: PermutationFlow, steps: int = 1) -> ClassicalMixture:
    """Push the initial weights forward through ``steps`` applications of ``flow``."""
    w = dict(mix.weights)
    for _ in range(steps):
        w = {flow(k): v for k, v in w.items()}
    return ClassicalMixture(w, mix.rank)


# ---------------------------------------------------------------------------
# semi-unitarity

def _target_index(v, target: PhysicalRegister | None):
    if isinstance(v, RegisterState):
        if target is None:
            return v
        return target.index_of(v)
    return int(v)


def check_semiunitary(evolution: Mapping, target: PhysicalRegister | None = None) -> bool:
    """True iff the deterministic map is injective, i.e. ``Ubar U`` is the identity on its source."""
    images = [_target_index(v, target) for v in evolution.values()]
    return len(set(images)) == len(images)


def evolution_matrix(evolution: Mapping[int, object], source_dim: int, target: PhysicalRegister) -> np.ndarray:
    """0/1 matrix ``U`` with ``U[t, s] = 1`` when ``|s)`` evolves to ``|t)``."""
    missing = [k for k in range(source_dim) if k not in evolution]
    if missing:
        raise ValueError(f"evolution undefined on source basis states {missing}")
    u = np.zeros((target.dim, source_dim), dtype=np.int64)
    for s in range(source_dim):
        u[_target_index(evolution[s], target), s] = 1
    return u

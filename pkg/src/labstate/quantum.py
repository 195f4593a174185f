"""Quantum labstates: exact superpositions of detector configurations.

A :class:`Labstate` maps configurations (:class:`~labstate.register.RegisterState`
values over a declared set of detectors) to :class:`~labstate.amplitude.Amp`
coefficients.  Configurations may contain faulty detectors, so decommissioned
apparatus shows up as ordinary, orthogonal basis terms.

Evolution is by :class:`StageMap`: rewrite rules keyed by the set of detectors
carrying a signal (the creation monomial).  Each rule image is a list of
``(amp, generators)`` terms; the generators (``A`` signal creation, ``D``
decommission, ``Z`` annihilate) are applied to the configuration left behind
once the source signals are absorbed, so debris already present carries
through.  Text form of a term: ``(i/r2)*A2*D3``, with ``VAC`` for no
generators.
"""
from __future__ import annotations

import itertools
import re
from collections import defaultdict
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .amplitude import (
    ONE,
    ZERO,
    Amp,
    AmpParseError,
    RealQ2,
    amp_as_rat,
    amp_sqmod,
    format_amp,
    format_amp_float,
    parse_amp,
)
from .bits import ABAR, EMPTY, FAULTY, GROUND, SIGNAL, A, BitOp, D, Z
from .errors import LabstateError, ScenarioParseError, UnmatchedMonomial
from .register import RegisterState, Site, apply_site_op, as_site, construct

__all__ = [
    "Configuration",
    "GENERATORS",
    "Gen",
    "apply_generators",
    "Labstate",
    "apply_op",
    "apply_creation",
    "apply_annihilation",
    "apply_decommission",
    "inner",
    "norm2",
    "equal_up_to_phase",
    "StageMap",
    "stage_apply",
    "check_isometry",
    "isometry_defects",
    "Projector",
    "probability",
    "DensityState",
    "density_probability",
    "parse_terms",
    "format_terms",
    "parse_monomial",
    "format_monomial",
    "format_labstate",
]

Configuration = RegisterState

GENERATORS: dict[str, BitOp] = {"A": ABAR, "D": D, "Z": Z}

Gen = tuple  # (kind, Site), kind in GENERATORS


def _gen(kind: str, site) -> Gen:
    if kind not in GENERATORS:
        raise ValueError(f"unknown generator {kind!r}")
    return (kind, as_site(site))


def apply_generators(gens: Sequence[Gen], config: RegisterState) -> RegisterState:
    """Apply a written product of generators, rightmost first."""
    for kind, site in reversed(gens):
        config = apply_site_op(GENERATORS[kind], site, config)
    return config


def _key(sites) -> frozenset:
    return frozenset(as_site(s) for s in sites)


class Labstate:
    """Finite superposition ``sum_c amp_c |c)`` with zero terms dropped.

    ``sites`` is the declared detector set whose all-ground configuration is
    the contextual vacuum ``|0)``; it is used for rendering and does not take
    part in equality.
    """

    __slots__ = ("terms", "sites")

    def __init__(self, terms: Mapping[RegisterState, object] | Iterable = (), sites: Iterable | None = None):
        acc: dict[RegisterState, Amp] = defaultdict(lambda: ZERO)
        items = terms.items() if isinstance(terms, Mapping) else terms
        for c, a in items:
            acc[c] = acc[c] + Amp.coerce(a)
        self.terms = {c: a for c, a in acc.items() if a}
        if sites is None:
            sites = {s for c in self.terms for s in c.sites()}
        self.sites = tuple(sorted(as_site(s) for s in sites))

    # constructors ---------------------------------------------------------
    @classmethod
    def vacuum(cls, sites: Iterable) -> "Labstate":
        sites = [as_site(s) for s in sites]
        return cls({construct(RegisterState(), sites): ONE}, sites)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[Amp, Sequence[Gen]]], sites: Iterable) -> "Labstate":
        sites = [as_site(s) for s in sites]
        vac = construct(RegisterState(), sites)
        return cls(((apply_generators(g, vac), a) for a, g in terms), sites)

    @classmethod
    def parse(cls, text: str, sites: Iterable) -> "Labstate":
        return cls.from_terms(parse_terms(text), sites)

    @property
    def vacuum_config(self) -> RegisterState:
        return construct(RegisterState(), self.sites)

    # algebra --------------------------------------------------------------
    def __add__(self, other: "Labstate") -> "Labstate":
        if not isinstance(other, Labstate):
            return NotImplemented
        return Labstate(
            itertools.chain(self.terms.items(), other.terms.items()),
            set(self.sites) | set(other.sites),
        )

    def __neg__(self):
        return self.scale(-ONE)

    def __sub__(self, other: "Labstate") -> "Labstate":
        return self + (-other)

    def scale(self, a) -> "Labstate":
        a = Amp.coerce(a)
        return Labstate({c: a * v for c, v in self.terms.items()}, self.sites)

    def __rmul__(self, a):
        try:
            return self.scale(a)
        except TypeError:
            return NotImplemented

    __mul__ = __rmul__

    def __eq__(self, other):
        if not isinstance(other, Labstate):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    def amplitude(self, config: RegisterState) -> Amp:
        return self.terms.get(config, ZERO)

    def norm2(self) -> RealQ2:
        return sum((amp_sqmod(a) for a in self.terms.values()), RealQ2(0))

    def is_normalized(self) -> bool:
        return self.norm2() == RealQ2(1)

    def __repr__(self):
        try:
            body = format_labstate(self)
        except ValueError:
            body = repr(self.terms)
        return f"Labstate({body})"


def apply_op(op: BitOp, site, state: Labstate) -> Labstate:
    """Single-detector bit operator extended linearly over the terms."""
    return Labstate(((apply_site_op(op, site, c), a) for c, a in state.terms.items()), state.sites)


def apply_creation(site, state: Labstate) -> Labstate:
    return apply_op(ABAR, site, state)


def apply_annihilation(site, state: Labstate) -> Labstate:
    return apply_op(A, site, state)


def apply_decommission(site, state: Labstate) -> Labstate:
    return apply_op(D, site, state)


def inner(a: Labstate, b: Labstate) -> Amp:
    """``(a|b)``, conjugate-linear in ``a``."""
    if len(a.terms) > len(b.terms):
        return inner(b, a).conjugate()
    return sum((v.conjugate() * b.terms[c] for c, v in a.terms.items() if c in b.terms), ZERO)


def norm2(state: Labstate) -> RealQ2:
    return state.norm2()


def equal_up_to_phase(a: Labstate, b: Labstate) -> bool:
    """True if ``b = u a`` for some unit-modulus amplitude ``u``."""
    if set(a.terms) != set(b.terms):
        return False
    if not a.terms:
        return True
    c0 = next(iter(a.terms))
    u = b.terms[c0] / a.terms[c0]
    return u.is_unit_modulus() and a.scale(u) == b


# ---------------------------------------------------------------------------
# stage maps

class StageMap:
    """One time step: creation-monomial rules plus pass-through detectors.

    ``rules`` maps a set of source detectors (those carrying the signals
    absorbed) to its image, a sequence of ``(amp, generators)``.  A monomial
    without its own rule is split greedily into joint (multi-site) rules first,
    then single-site rules; the image is the product of the parts.  The empty
    monomial maps to itself unless a rule says otherwise.  Signals on
    ``passthrough`` detectors are never absorbed.
    """

    def __init__(self, rules: Mapping, passthrough: Iterable = (), name: str | None = None):
        self.rules: dict[frozenset, tuple[tuple[Amp, tuple[Gen, ...]], ...]] = {}
        for key, image in rules.items():
            if isinstance(key, (int, Site)):
                key = (key,)
            k = _key(key)
            if k in self.rules:
                raise ValueError(f"duplicate rule for monomial {sorted(map(str, k))}")
            self.rules[k] = tuple((Amp.coerce(a), tuple(_gen(*g) for g in gens)) for a, gens in image)
        self.passthrough = _key(passthrough)
        overlap = [str(s) for k in self.rules for s in k if s in self.passthrough]
        if overlap:
            raise ValueError(f"pass-through detectors {overlap} also have rules")
        self.name = name

    def __eq__(self, other):
        if not isinstance(other, StageMap):
            return NotImplemented
        return (
            self.rules == other.rules
            and self.passthrough == other.passthrough
            and self.name == other.name
        )

    @property
    def inputs(self) -> frozenset:
        return frozenset().union(*self.rules) if self.rules else frozenset()

    def resolve(self, monomial: Iterable) -> tuple[tuple[Amp, tuple[Gen, ...]], ...]:
        m = _key(monomial)
        if m in self.rules:
            return self.rules[m]
        if not m:
            return ((ONE, ()),)
        rest = set(m)
        parts = []
        for key in sorted((k for k in self.rules if len(k) > 1), key=lambda k: sorted(k)):
            if key <= rest:
                parts.append(self.rules[key])
                rest -= key
        for s in sorted(rest):
            single = self.rules.get(frozenset({s}))
            if single is None:
                raise UnmatchedMonomial(
                    f"stage {self.name or '?'}: no rule covers detector {s} "
                    f"in monomial {format_monomial([('A', x) for x in sorted(m)])}"
                )
            parts.append(single)
        out = []
        for combo in itertools.product(*parts):
            amp, gens = ONE, ()
            for a, g in combo:
                amp = amp * a
                gens = gens + g
            out.append((amp, gens))
        return tuple(out)

    def image_state(self, monomial: Iterable, sites: Iterable | None = None) -> Labstate:
        """Image of the monomial applied to an all-ground register."""
        m = _key(monomial)
        image = self.resolve(m)
        if sites is None:
            sites = set(m) | {g[1] for _, gens in image for g in gens}
        return Labstate.from_terms(image, sites)

    def __repr__(self):
        return f"StageMap({self.name!r}, {len(self.rules)} rules)"


def _monomial_of(config: RegisterState, passthrough: frozenset) -> frozenset:
    return frozenset(s for s in config.sites_in(SIGNAL) if s not in passthrough)


def stage_apply(smap: StageMap, state: Labstate) -> Labstate:
    """Evolve every term by its monomial's rule; faulty debris is left in place."""
    out: list[tuple[RegisterState, Amp]] = []
    sites = set(state.sites)
    for config, amp in state.terms.items():
        m = _monomial_of(config, smap.passthrough)
        image = smap.resolve(m)
        residual = config.replace({s: GROUND for s in m})
        for a, gens in image:
            sites.update(g[1] for g in gens)
            out.append((apply_generators(gens, residual), amp * a))
    return Labstate(out, sites)


def monomials_of(state: Labstate, smap: StageMap | None = None) -> set[frozenset]:
    pt = smap.passthrough if smap is not None else frozenset()
    return {_monomial_of(c, pt) for c in state.terms}


def isometry_defects(smap: StageMap, domain: Iterable | None = None) -> list[tuple[frozenset, frozenset, Amp]]:
    """Pairs of domain monomials whose images break ``(U m|U m') = delta``."""
    if domain is None:
        domain = set(smap.rules) | {frozenset()}
    domain = sorted({_key(m) for m in domain}, key=lambda k: (len(k), sorted(k)))
    resolved = {m: smap.resolve(m) for m in domain}
    sites = set(smap.inputs).union(*domain)
    for img in resolved.values():
        sites |= {g[1] for _, gens in img for g in gens}
    images = {m: Labstate.from_terms(img, sites) for m, img in resolved.items()}
    bad = []
    for i, m in enumerate(domain):
        for n in domain[i:]:
            want = ONE if m == n else ZERO
            got = inner(images[m], images[n])
            if got != want:
                bad.append((m, n, got))
    return bad


def check_isometry(smap: StageMap, domain: Iterable | None = None) -> bool:
    """Images of distinct domain monomials are orthonormal.

    The default domain is every rule key plus the empty monomial.
    """
    return not isometry_defects(smap, domain)


# ---------------------------------------------------------------------------
# measurement

class Projector:
    """Diagonal projector selecting configurations by a conjunction of conditions.

    ``signal``/``faulty``/``ground`` list detectors that must be in that
    state; ``no_other_signal`` additionally forbids signals anywhere not
    listed in ``signal``.  ``predicate`` may add an arbitrary extra test.
    """

    def __init__(self, signal=(), faulty=(), ground=(), no_other_signal=False,
                 predicate: Callable[[RegisterState], bool] | None = None,
                 name: str | None = None):
        self.signal = _key(signal)
        self.faulty = _key(faulty)
        self.ground = _key(ground)
        self.no_other_signal = bool(no_other_signal)
        self.predicate = predicate
        self.name = name

    def __call__(self, config: RegisterState) -> bool:
        if any(config[s] is not SIGNAL for s in self.signal):
            return False
        if any(config[s] is not FAULTY for s in self.faulty):
            return False
        if any(config[s] is not GROUND for s in self.ground):
            return False
        if self.no_other_signal and set(config.sites_in(SIGNAL)) - self.signal:
            return False
        if self.predicate is not None and not self.predicate(config):
            return False
        return True

    def __matmul__(self, other: "Projector") -> "Projector":
        """Product of two diagonal projectors: both conditions must hold."""
        return Projector(predicate=lambda c: self(c) and other(c),
                         name=f"{self.name}*{other.name}")

    def apply(self, state: Labstate) -> Labstate:
        return Labstate({c: a for c, a in state.terms.items() if self(c)}, state.sites)

    def conditions(self) -> list[str]:
        out = [f"signal@{s}" for s in sorted(self.signal)]
        out += [f"faulty@{s}" for s in sorted(self.faulty)]
        out += [f"ground@{s}" for s in sorted(self.ground)]
        if self.no_other_signal:
            out.append("noothersignal")
        return out

    def __eq__(self, other):
        if not isinstance(other, Projector):
            return NotImplemented
        return (
            (self.signal, self.faulty, self.ground, self.no_other_signal, self.predicate, self.name)
            == (other.signal, other.faulty, other.ground, other.no_other_signal, other.predicate, other.name)
        )

    def __repr__(self):
        return f"Projector({self.name!r}: {', '.join(self.conditions())})"


def probability(state: Labstate, p: Projector) -> Fraction:
    """Born probability of ``p`` in a normalised labstate, as an exact rational."""
    n = state.norm2()
    if n != RealQ2(1):
        raise LabstateError(f"labstate is not normalised (norm^2 = {float(n):.12g})")
    total = sum((amp_sqmod(a) for c, a in state.terms.items() if p(c)), RealQ2(0))
    return amp_as_rat(total)


class DensityState:
    """Classical mixture of pure labstates, ``sum_k w_k |psi_k)(psi_k|``."""

    def __init__(self, branches: Iterable[tuple[object, Labstate]]):
        self.branches = [(Fraction(w), s) for w, s in branches]
        if any(w < 0 for w, _ in self.branches):
            raise ValueError("mixture weights must be non-negative")
        total = sum(w for w, _ in self.branches)
        if total != 1:
            raise ValueError(f"mixture weights sum to {total}, not 1")

    def evolve(self, fn: Callable[[Labstate], Labstate]) -> "DensityState":
        return DensityState((w, fn(s)) for w, s in self.branches)


def density_probability(rho: DensityState, p: Projector) -> Fraction:
    return sum((w * probability(s, p) for w, s in rho.branches if w), Fraction(0))


# ---------------------------------------------------------------------------
# text form

_GEN_RE = re.compile(r"([ADZ])(\d+)$")


def _split_top(text: str, sep: str, offset: int = 0) -> list[tuple[str, int]]:
    """Split on ``sep`` outside parentheses, keeping each piece's offset."""
    out, depth, start = [], 0, 0
    for k, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ScenarioParseError("unbalanced ')'", column=offset + k + 1)
        elif ch == sep and depth == 0:
            out.append((text[start:k], offset + start))
            start = k + 1
    if depth != 0:
        raise ScenarioParseError("unbalanced '('", column=offset + len(text) + 1)
    out.append((text[start:], offset + start))
    return out


def _strip(piece: str, off: int) -> tuple[str, int]:
    lead = len(piece) - len(piece.lstrip())
    return piece.strip(), off + lead


def parse_monomial(text: str, offset: int = 0) -> tuple[Gen, ...]:
    """``A3*A4`` or ``VAC`` -> generator tuple."""
    gens = []
    for piece, off in _split_top(text, "*", offset):
        piece, off = _strip(piece, off)
        if piece == "VAC":
            continue
        m = _GEN_RE.match(piece)
        if m is None:
            raise ScenarioParseError(f"expected a generator like A3 or D4, got {piece!r}", column=off + 1)
        gens.append(_gen(m.group(1), int(m.group(2))))
    return tuple(gens)


def _parse_term(text: str, offset: int) -> tuple[Amp, tuple[Gen, ...]]:
    amp, gens = ONE, []
    pieces = _split_top(text, "*", offset)
    for piece, off in pieces:
        piece, off = _strip(piece, off)
        if not piece:
            raise ScenarioParseError("empty factor", column=off + 1)
        if piece == "VAC":
            continue
        m = _GEN_RE.match(piece)
        if m is not None:
            gens.append(_gen(m.group(1), int(m.group(2))))
            continue
        try:
            amp = amp * parse_amp(piece)
        except AmpParseError as e:
            col = off + 1 + (e.pos or 0)
            raise ScenarioParseError(f"bad amplitude {piece!r}: {e}", column=col) from None
    return amp, tuple(gens)


def parse_terms(text: str, offset: int = 0) -> list[tuple[Amp, tuple[Gen, ...]]]:
    """Parse ``amp*monomial + amp*monomial ...``; a bare monomial has amplitude 1."""
    out = []
    for piece, off in _split_top(text, "+", offset):
        piece, off = _strip(piece, off)
        if not piece:
            raise ScenarioParseError("empty term", column=off + 1)
        out.append(_parse_term(piece, off))
    return out


def format_monomial(gens: Sequence[Gen]) -> str:
    return "*".join(f"{k}{s}" for k, s in gens) if gens else "VAC"


def format_terms(terms: Iterable[tuple[Amp, Sequence[Gen]]], float_mode: bool = False) -> str:
    fmt = format_amp_float if float_mode else format_amp
    return " + ".join(f"{fmt(a)}*{format_monomial(g)}" for a, g in terms)


_KIND = {SIGNAL: "A", FAULTY: "D", EMPTY: "Z"}


def config_monomial(config: RegisterState, sites: Iterable) -> tuple[Gen, ...]:
    """Generators that take the all-ground state of ``sites`` to ``config``."""
    sites = sorted(as_site(s) for s in sites)
    declared = set(sites)
    stray = [str(s) for s in config.sites() if s not in declared]
    if stray:
        raise ValueError(f"configuration uses undeclared detectors {stray}")
    return tuple((_KIND[config[s]], s) for s in sites if config[s] is not GROUND)


def labstate_terms(state: Labstate) -> list[tuple[Amp, tuple[Gen, ...]]]:
    rows = [(config_monomial(c, state.sites), a) for c, a in state.terms.items()]
    rows.sort(key=lambda r: [(s, k) for k, s in r[0]])
    return [(a, g) for g, a in rows]


def format_labstate(state: Labstate, float_mode: bool = False) -> str:
    if not state.terms:
        return "0"
    return format_terms(labstate_terms(state), float_mode)

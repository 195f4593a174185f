"""Line-oriented scenario files.

::

    # Mach-Zehnder with a dud bomb
    esds 7
    init A1
    stage split
      map A1 -> (i/r2)*A2 + (-1/r2)*A3
    stage mirrors
      map A2 -> (-1)*A5
      map A3 -> (-1)*A4
    outcome D6 : signal@6

Directives:

``esds N``
    declares detectors ``1..N``; must precede everything that names a detector.
``init <terms>``
    initial labstate, terms joined by ``+`` (see :func:`labstate.quantum.parse_terms`).
``stage <name>``
    opens a stage; the indented lines after it are ``map <monomial> -> <terms>``
    rules (monomials of ``A<k>`` only, or ``VAC``) and optional
    ``pass <k> <k> ...`` listing detectors whose signals are left alone.
``outcome <name> : <predicate>``
    comma-separated ``signal@k``, ``faulty@k``, ``ground@k``, ``noothersignal``.

``#`` starts a comment.  CRLF line endings are accepted.
"""
from __future__ import annotations

import re
from importlib import resources

from .amplitude import format_amp
from .errors import ScenarioParseError
from .network import Scenario
from .quantum import (
    Labstate,
    Projector,
    StageMap,
    format_monomial,
    labstate_terms,
    parse_monomial,
    parse_terms,
)
from .register import as_site

__all__ = ["parse_scenario", "render_scenario", "load_scenario", "BUILTIN_SCENARIOS", "builtin_text"]

BUILTIN_SCENARIOS = {
    "ev-dud": "ev_dud.scn",
    "ev-active": "ev_active.scn",
    "hardy": "hardy.scn",
}

_PRED = re.compile(r"(signal|faulty|ground)@(\d+)$")
_NAME = re.compile(r"\S+")


class _Parser:
    def __init__(self, text: str):
        self.lines = text.replace("\r\n", "\n").replace("\r", "\n").split("\n")
        self.n_sites: int | None = None
        self.init = None
        self.stages: list[tuple[str, dict, list, int]] = []
        self.outcomes: dict[str, Projector] = {}

    def error(self, msg, lineno, col=None):
        raise ScenarioParseError(msg, lineno, col)

    def check_site(self, k: int, lineno: int, col: int | None):
        if self.n_sites is None:
            self.error("'esds' must come before any detector is named", lineno, col)
        if not 1 <= k <= self.n_sites:
            self.error(f"detector {k} is not declared (esds {self.n_sites})", lineno, col)

    def terms(self, text: str, offset: int, lineno: int):
        try:
            terms = parse_terms(text, offset)
        except ScenarioParseError as e:
            self.error(e.message, lineno, e.column)
        for _, gens in terms:
            for kind, s in gens:
                m = re.search(rf"{kind}{s.id}(?!\d)", text)
                self.check_site(s.id, lineno, offset + 1 + (m.start() if m else 0))
        return terms

    def parse(self) -> Scenario:
        current = None
        for lineno, raw in enumerate(self.lines, start=1):
            line = raw.split("#", 1)[0].rstrip()
            if not line.strip():
                continue
            indented = line[0] in " \t"
            body = line.strip()
            col0 = len(line) - len(line.lstrip())
            word = body.split(None, 1)[0]
            rest_off = col0 + len(word)
            rest = line[rest_off:]
            if indented:
                if current is None:
                    self.error("indented line outside a stage", lineno, col0 + 1)
                if word == "map":
                    self.map_line(current, rest, rest_off, lineno)
                elif word == "pass":
                    for m in re.finditer(r"\S+", rest):
                        if not m.group().isdigit():
                            self.error(f"expected a detector number, got {m.group()!r}", lineno, rest_off + m.start() + 1)
                        self.check_site(int(m.group()), lineno, rest_off + m.start() + 1)
                        current[2].append(int(m.group()))
                else:
                    self.error(f"expected 'map' or 'pass' inside a stage, got {word!r}", lineno, col0 + 1)
                continue
            current = None
            if word == "esds":
                if self.n_sites is not None:
                    self.error("duplicate 'esds'", lineno, 1)
                if not rest.strip().isdigit() or int(rest) < 1:
                    self.error("'esds' needs a positive integer", lineno, rest_off + 2)
                self.n_sites = int(rest)
            elif word == "init":
                if self.init is not None:
                    self.error("duplicate 'init'", lineno, 1)
                if not rest.strip():
                    self.error("'init' needs at least one term", lineno, rest_off + 1)
                self.init = self.terms(rest, rest_off, lineno)
            elif word == "stage":
                name = rest.strip()
                if not _NAME.fullmatch(name or "-"):
                    self.error("stage name must be a single word", lineno, rest_off + 2)
                current = (name or f"stage{len(self.stages) + 1}", {}, [], lineno)
                self.stages.append(current)
            elif word == "outcome":
                self.outcome_line(rest, rest_off, lineno)
            else:
                self.error(f"unknown directive {word!r}", lineno, col0 + 1)
        if self.n_sites is None:
            raise ScenarioParseError("missing 'esds' declaration")
        if self.init is None:
            raise ScenarioParseError("missing 'init' line")
        sites = [as_site(k) for k in range(1, self.n_sites + 1)]
        stages = []
        for name, rules, passthrough, lineno in self.stages:
            try:
                stages.append(StageMap(rules, passthrough, name=name))
            except ValueError as e:
                self.error(str(e), lineno)
        return Scenario(sites, Labstate.from_terms(self.init, sites), stages, self.outcomes)

    def map_line(self, current, rest, off, lineno):
        if "->" not in rest:
            self.error("expected 'map <monomial> -> <terms>'", lineno, off + 1)
        k = rest.index("->")
        lhs, rhs = rest[:k], rest[k + 2:]
        try:
            gens = parse_monomial(lhs, off)
        except ScenarioParseError as e:
            self.error(e.message, lineno, e.column)
        kinds = {g[0] for g in gens}
        if kinds - {"A"}:
            self.error("rule monomials may only contain signal generators A<k>", lineno, off + 2)
        key = tuple(sorted(g[1].id for g in gens))
        if len(set(key)) != len(key):
            self.error("repeated detector in rule monomial", lineno, off + 2)
        for s in key:
            self.check_site(s, lineno, off + 2)
        rules = current[1]
        if frozenset(key) in {frozenset(x) for x in rules}:
            self.error(f"duplicate rule for {format_monomial(gens)} in stage {current[0]}", lineno, off + 2)
        rules[key] = self.terms(rhs, off + k + 2, lineno)

    def outcome_line(self, rest, off, lineno):
        if ":" not in rest:
            self.error("expected 'outcome <name> : <predicate>'", lineno, off + 1)
        k = rest.index(":")
        name = rest[:k].strip()
        if not name:
            self.error("outcome needs a name", lineno, off + 1)
        if name in self.outcomes:
            self.error(f"duplicate outcome {name!r}", lineno, off + 2)
        sets = {"signal": [], "faulty": [], "ground": []}
        other = False
        pos = off + k + 1
        for piece in rest[k + 1:].split(","):
            col = pos + (len(piece) - len(piece.lstrip())) + 1
            pos += len(piece) + 1
            tok = piece.strip()
            if tok == "noothersignal":
                other = True
                continue
            m = _PRED.match(tok)
            if m is None:
                self.error(f"bad predicate {tok!r}", lineno, col)
            self.check_site(int(m.group(2)), lineno, col)
            sets[m.group(1)].append(int(m.group(2)))
        self.outcomes[name] = Projector(
            signal=sets["signal"], faulty=sets["faulty"], ground=sets["ground"],
            no_other_signal=other, name=name,
        )


def parse_scenario(text: str) -> Scenario:
    """Parse scenario text; errors carry line and column."""
    return _Parser(text).parse()


def _render_terms(terms) -> str:
    return " + ".join(f"{format_amp(a)}*{format_monomial(g)}" for a, g in terms)


def render_scenario(sc: Scenario) -> str:
    n = max(s.id for s in sc.sites)
    if [s.id for s in sc.sites] != list(range(1, n + 1)):
        raise ValueError("scenario files declare detectors 1..N only")
    out = [f"esds {n}", f"init {_render_terms(labstate_terms(sc.initial))}"]
    for k, smap in enumerate(sc.stages, start=1):
        out.append(f"stage {smap.name or f'stage{k}'}")
        for key in sorted(smap.rules, key=lambda m: (len(m), sorted(m))):
            lhs = format_monomial([("A", s) for s in sorted(key)])
            out.append(f"  map {lhs} -> {_render_terms(smap.rules[key])}")
        if smap.passthrough:
            out.append("  pass " + " ".join(str(s.id) for s in sorted(smap.passthrough)))
    for name, p in sc.outcomes.items():
        out.append(f"outcome {name} : {', '.join(p.conditions())}")
    return "\n".join(out) + "\n"


def builtin_text(name: str) -> str:
    fname = BUILTIN_SCENARIOS[name]
    return resources.files("labstate").joinpath("scenarios", fname).read_text(encoding="utf-8")


def load_scenario(path_or_name: str) -> Scenario:
    """Read a scenario file, or one of :data:`BUILTIN_SCENARIOS` by name."""
    if path_or_name in BUILTIN_SCENARIOS:
        sc = parse_scenario(builtin_text(path_or_name))
        sc.name = path_or_name
        return sc
    with open(path_or_name, encoding="utf-8", newline="") as fh:
        sc = parse_scenario(fh.read())
    sc.name = path_or_name
    return sc

"""Line-oriented scenario files: key: value pairs plus [kind name] sections.

Grammar, documented for users in docs/scenario.md:

    # comment                       blank lines and # lines are skipped
    audit: example1                 top-level keys before any section
    rank: 2
    radii: 8 16
    depths: 1 2 3
    budget: 5000000

    [subgroup K]                    actor sections, one actor each
    generators: xx yy

    [rational U]
    expression: <x> . <y>

    [class A]
    representative: x

    [explicit S]
    words: 1 x xy

    [options]                       free strings, validated by the audit
    c-values: 1 2 3

Rational expressions: union terms split on `|`, each term a chain of
reduced products split on `.`, atoms being `<g1 g2 ...>` (the language of
the subgroup generated by the g_i, which also declares it a member),
`w*` (all non-negative powers of w), a bare word (singleton), `ALL`
(every reduced word), or `1` (the identity alone).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..freewords import Alphabet, ParseError, Word
from ..ratsets import ReducedAutomaton, boolean, reduced_product
from ..stallings import SubgroupGraph


class ScenarioError(ValueError):
    """Parse or validation failure; message carries a line number."""


ACTOR_KINDS = ("subgroup", "rational", "class", "explicit")
_TOP_KEYS = ("audit", "rank", "radii", "depths", "budget")
_ACTOR_KEYS = {
    "subgroup": ("generators",),
    "rational": ("expression",),
    "class": ("representative",),
    "explicit": ("words",),
}


@dataclass
class Actor:
    kind: str
    name: str
    line: int
    generators: tuple[Word, ...] = ()
    representative: Word | None = None
    words: tuple[Word, ...] = ()
    expression: str = ""
    graph: SubgroupGraph | None = None
    automaton: ReducedAutomaton | None = None
    members: tuple[SubgroupGraph, ...] = ()


@dataclass
class Scenario:
    path: str
    audit: str
    rank: int
    alphabet: Alphabet
    radii: tuple[int, ...]
    depths: tuple[int, ...]
    budget: int
    options: dict[str, str]
    actors: dict[str, Actor] = field(default_factory=dict)

    def actors_of_kind(self, kind: str) -> list[Actor]:
        return [a for a in self.actors.values() if a.kind == kind]

    def require(self, name: str, kind: str) -> Actor:
        a = self.actors.get(name)
        if a is None:
            raise ScenarioError(
                f"scenario does not define the required {kind} actor '{name}'"
            )
        if a.kind != kind:
            raise ScenarioError(
                f"actor '{name}' is a {a.kind} actor but the audit needs a {kind}"
            )
        return a


def _err(line: int, message: str) -> ScenarioError:
    return ScenarioError(f"line {line}: {message}")


def _parse_word(alphabet: Alphabet, text: str, line: int, where: str) -> Word:
    try:
        return alphabet.parse(text)
    except ParseError as exc:
        raise _err(line, f"{where}: {exc}") from exc


def _parse_ints(value: str, line: int, key: str) -> tuple[int, ...]:
    out = []
    for part in value.split():
        try:
            out.append(int(part))
        except ValueError:
            raise _err(line, f"{key}: expected integers, got {part!r}") from None
    return tuple(out)


_ATOM_RE = re.compile(r"<[^<>]*>|\S+")


def build_expression(
    alphabet: Alphabet, expression: str, line: int, name: str
) -> tuple[ReducedAutomaton, tuple[SubgroupGraph, ...]]:
    """Compile a rational expression; returns (automaton, subgroup members)."""

    def fail(msg: str) -> ScenarioError:
        return _err(line, f"rational actor '{name}': {msg}")

    tokens = _ATOM_RE.findall(expression)
    if not tokens:
        raise fail("empty expression")
    members: list[SubgroupGraph] = []

    def atom(tok: str) -> ReducedAutomaton:
        if tok == "ALL":
            return ReducedAutomaton.all_reduced(alphabet)
        if tok == "1":
            return ReducedAutomaton.epsilon(alphabet)
        if tok.startswith("<"):
            gens_text = tok[1:-1].split()
            if not gens_text:
                raise fail("empty subgroup atom <>")
            gens = [_parse_word(alphabet, g, line, f"rational actor '{name}'") for g in gens_text]
            graph = SubgroupGraph.from_generators(alphabet, gens)
            members.append(graph)
            return ReducedAutomaton.from_subgroup(graph)
        if tok.endswith("*"):
            w = _parse_word(alphabet, tok[:-1], line, f"rational actor '{name}'")
            if not w:
                raise fail("cannot star the empty word")
            return ReducedAutomaton.star(alphabet, w)
        w = _parse_word(alphabet, tok, line, f"rational actor '{name}'")
        return ReducedAutomaton.singleton(alphabet, w)

    # split on "|" into terms, each term a "."-chain of atoms
    terms: list[list[str]] = [[]]
    for tok in tokens:
        if tok == "|":
            if not terms[-1]:
                raise fail("union term is empty")
            terms.append([])
        else:
            terms[-1].append(tok)
    if not terms[-1]:
        raise fail("union term is empty")

    union: ReducedAutomaton | None = None
    for term in terms:
        acc: ReducedAutomaton | None = None
        expect_atom = True
        for tok in term:
            if expect_atom:
                if tok == ".":
                    raise fail("misplaced '.'")
                a = atom(tok)
                acc = a if acc is None else reduced_product(acc, a)
                expect_atom = False
            else:
                if tok != ".":
                    raise fail(f"expected '.' between factors, got {tok!r}")
                expect_atom = True
        if expect_atom:
            raise fail("dangling '.' at end of term")
        assert acc is not None
        union = acc if union is None else boolean("or", union, acc)
    assert union is not None
    return union, tuple(members)


def parse_scenario(text: str, path: str = "<scenario>") -> Scenario:
    top: dict[str, tuple[int, str]] = {}
    sections: list[tuple[int, str, str, dict[str, tuple[int, str]]]] = []
    current: dict[str, tuple[int, str]] | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise _err(lineno, "unterminated section header")
            inner = line[1:-1].strip()
            if inner == "options":
                kind, name = "options", ""
            else:
                parts = inner.split(None, 1)
                if len(parts) != 2:
                    raise _err(lineno, f"section header needs a kind and a name: [{inner}]")
                kind, name = parts
                if kind not in ACTOR_KINDS:
                    raise _err(lineno, f"unknown section kind {kind!r}")
            current = {}
            sections.append((lineno, kind, name, current))
            continue
        if ":" not in line:
            raise _err(lineno, f"expected 'key: value', got {line!r}")
        key, _, value = line.partition(":")
        key, value = key.strip(), value.strip()
        if current is None:
            if key not in _TOP_KEYS:
                raise _err(lineno, f"unknown top-level key {key!r}")
            if key in top:
                raise _err(lineno, f"duplicate top-level key {key!r}")
            top[key] = (lineno, value)
        else:
            if key in current:
                raise _err(lineno, f"duplicate key {key!r} in section")
            current[key] = (lineno, value)

    if "audit" not in top:
        raise ScenarioError("line 1: scenario is missing the required 'audit:' key")
    audit = top["audit"][1]

    rank = 2
    if "rank" in top:
        lineno, value = top["rank"]
        rank = int(_parse_ints(value, lineno, "rank")[0]) if value.split() else 0
        if rank < 1:
            raise _err(lineno, "rank must be at least 1")
    alphabet = Alphabet(rank)

    radii: tuple[int, ...] = ()
    if "radii" in top:
        lineno, value = top["radii"]
        radii = _parse_ints(value, lineno, "radii")
        if any(r <= 0 for r in radii):
            raise _err(lineno, "radii must be positive")
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise _err(lineno, "radii must be strictly increasing")

    depths: tuple[int, ...] = ()
    if "depths" in top:
        lineno, value = top["depths"]
        depths = _parse_ints(value, lineno, "depths")
        if any(d <= 0 for d in depths):
            raise _err(lineno, "depths must be positive")
        if any(b <= a for a, b in zip(depths, depths[1:])):
            raise _err(lineno, "depths must be strictly increasing")

    budget = 5_000_000
    if "budget" in top:
        lineno, value = top["budget"]
        budget = _parse_ints(value, lineno, "budget")[0]
        if budget <= 0:
            raise _err(lineno, "budget must be positive")

    options: dict[str, str] = {}
    actors: dict[str, Actor] = {}
    for lineno, kind, name, fields in sections:
        if kind == "options":
            for key, (_, value) in fields.items():
                options[key] = value
            continue
        if name in actors:
            raise _err(lineno, f"duplicate actor name {name!r}")
        allowed = _ACTOR_KEYS[kind]
        for key, (kl, _) in fields.items():
            if key not in allowed:
                raise _err(kl, f"unknown key {key!r} for a {kind} actor")
        actor = Actor(kind=kind, name=name, line=lineno)
        if kind == "subgroup":
            if "generators" not in fields:
                raise _err(lineno, f"subgroup actor '{name}' needs a generators: line")
            gl, gv = fields["generators"]
            gens = tuple(
                _parse_word(alphabet, t, gl, f"subgroup actor '{name}'") for t in gv.split()
            )
            if not gens:
                raise _err(gl, f"subgroup actor '{name}' has no generators")
            actor.generators = gens
            actor.graph = SubgroupGraph.from_generators(alphabet, gens)
        elif kind == "rational":
            if "expression" not in fields:
                raise _err(lineno, f"rational actor '{name}' needs an expression: line")
            el, ev = fields["expression"]
            actor.expression = ev
            actor.automaton, actor.members = build_expression(alphabet, ev, el, name)
        elif kind == "class":
            if "representative" not in fields:
                raise _err(lineno, f"class actor '{name}' needs a representative: line")
            rl, rv = fields["representative"]
            actor.representative = _parse_word(alphabet, rv, rl, f"class actor '{name}'")
        elif kind == "explicit":
            if "words" not in fields:
                raise _err(lineno, f"explicit actor '{name}' needs a words: line")
            wl, wv = fields["words"]
            actor.words = tuple(
                _parse_word(alphabet, t, wl, f"explicit actor '{name}'") for t in wv.split()
            )
        actors[name] = actor

    return Scenario(
        path=path,
        audit=audit,
        rank=rank,
        alphabet=alphabet,
        radii=radii,
        depths=depths,
        budget=budget,
        options=options,
        actors=actors,
    )


def load_scenario(path: str) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_scenario(fh.read(), path=path)

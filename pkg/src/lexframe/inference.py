"""Deduction by composition of lexical relations.

A composition triple ``(R1 R2 R3)`` stands for the rule
``X R1 Y, Y R2 Z => X R3 Z``.  Explicit rules may have longer bodies and
constants.  Queries chain backwards from the asked relation; every fact a
query derives lives in a per-query scratch table and never reaches the
knowledge base.
"""
from __future__ import annotations

import difflib
import re
import sys
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .frames import KnowledgeBase, UnknownSlotError
from .lexicon import ConceptRef, ConceptRefError, parse_concept_ref

DEFAULT_DEPTH = 8
MAX_DEPTH = 1000
PROVENANCE_RANK = {"explicit": 0, "inherited": 1, "derived": 2}


class InferenceError(ValueError):
    pass


class RulesFileError(InferenceError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


Term = Union[Var, str]
_VAR_RE = re.compile(r"^[A-Z][0-9]*$")


def _term_text(term: Term) -> str:
    return str(term) if isinstance(term, Var) else f"|{term}|"


@dataclass(frozen=True)
class Atom:
    subject: Term
    relation: str
    object: Term

    def variables(self) -> set[str]:
        return {t.name for t in (self.subject, self.object) if isinstance(t, Var)}

    def __str__(self) -> str:
        return f"{_term_text(self.subject)} {self.relation} {_term_text(self.object)}"


@dataclass(frozen=True)
class CompositionRule:
    body: tuple[Atom, ...]
    head: Atom
    label: str = ""

    def __post_init__(self) -> None:
        if len(self.body) < 2:
            raise InferenceError("a composition rule needs at least two body atoms")
        bound = set().union(*(a.variables() for a in self.body))
        missing = self.head.variables() - bound
        if missing:
            raise InferenceError(f"head variable(s) {', '.join(sorted(missing))} not bound by the body")

    def relations(self) -> set[str]:
        return {a.relation for a in self.body} | {self.head.relation}

    def __str__(self) -> str:
        return self.label or (", ".join(map(str, self.body)) + f" => {self.head}")


@dataclass(frozen=True)
class CompositionTriple:
    r1: str
    r2: str
    r3: str

    def as_rule(self) -> CompositionRule:
        x, y, z = Var("X"), Var("Y"), Var("Z")
        return CompositionRule((Atom(x, self.r1, y), Atom(y, self.r2, z)), Atom(x, self.r3, z),
                               label=str(self))

    def __str__(self) -> str:
        return f"({self.r1} {self.r2} {self.r3})"


def default_triples() -> list[CompositionTriple]:
    return [
        CompositionTriple("PARTIE-DE", "PARTIE-DE", "PARTIE-DE"),
        CompositionTriple("PARTIE-DE", "LOCATIF", "LOCATIF"),
        CompositionTriple("LOCATIF", "HYPERONYME", "LOCATIF"),
        CompositionTriple("MEMBRE-DE", "HYPERONYME", "MEMBRE-DE"),
        CompositionTriple("CARACTERISTIQUE", "QUI-A", "POSSESSION"),
        CompositionTriple("OBJECTIF", "CE-QUI", "OBJECTIF"),
    ]


class Registry:
    """Triples, explicit rules and relation aliases, indexed by the relation they derive.

    Kept apart from the knowledge base so that a frozen KB can be queried
    with any rule set.
    """

    def __init__(self, kb: KnowledgeBase | None = None):
        self.kb = kb
        self.triples: dict[str, list[CompositionTriple]] = {}
        self.rules: dict[str, list[CompositionRule]] = {}
        self.aliases: dict[str, str] = {}

    def _check(self, relations: Iterable[str]) -> None:
        if self.kb is None:
            return
        for rel in relations:
            try:
                self.kb.slot(rel)
            except UnknownSlotError:
                raise InferenceError(f"unknown relation {rel}") from None

    def declare_triple(self, r1: str, r2: str, r3: str) -> bool:
        self._check((r1, r2, r3))
        triple = CompositionTriple(r1, r2, r3)
        bucket = self.triples.setdefault(r3, [])
        if triple in bucket:
            return False
        bucket.append(triple)
        return True

    def declare_rule(self, rule: CompositionRule) -> bool:
        self._check(rule.relations())
        bucket = self.rules.setdefault(rule.head.relation, [])
        if rule in bucket:
            return False
        bucket.append(rule)
        return True

    def declare_alias(self, concept: str | ConceptRef, relation: str) -> None:
        self._check((relation,))
        ref = concept if isinstance(concept, ConceptRef) else parse_concept_ref(concept)
        self.aliases[str(ref.base())] = relation

    def all_triples(self) -> list[CompositionTriple]:
        return [t for r3 in sorted(self.triples) for t in self.triples[r3]]

    def rules_for(self, relation: str) -> list[CompositionRule]:
        """Rules deriving ``relation``, triples compiled afresh on every call."""
        return [t.as_rule() for t in self.triples.get(relation, [])] + list(self.rules.get(relation, []))


def default_registry(kb: KnowledgeBase | None = None) -> Registry:
    registry = Registry(kb)
    for t in default_triples():
        registry.declare_triple(t.r1, t.r2, t.r3)
    return registry


# -- rules file -------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\|[^|]*\||,|[^\s,]+")


def _parse_term(token: str, line: int) -> Term:
    if token.startswith("|"):
        try:
            return str(parse_concept_ref(token))
        except ConceptRefError as exc:
            raise RulesFileError(str(exc), line) from None
    if _VAR_RE.match(token):
        return Var(token)
    raise RulesFileError(f"expected a variable (X, Y1, ...) or a |concept|, got {token!r}", line)


def _parse_atoms(tokens: list[str], line: int) -> list[Atom]:
    atoms, chunk = [], []
    for tok in tokens + [","]:
        if tok != ",":
            chunk.append(tok)
            continue
        if len(chunk) != 3:
            raise RulesFileError(f"atom must be 'term RELATION term', got {' '.join(chunk)!r}", line)
        atoms.append(Atom(_parse_term(chunk[0], line), chunk[1], _parse_term(chunk[2], line)))
        chunk = []
    return atoms


def parse_rules(text: str, registry: Registry | None = None) -> Registry:
    """Read ``triple``, ``rule`` and ``alias`` declarations into a registry."""
    registry = registry if registry is not None else Registry()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = _TOKEN_RE.findall(line)
        kind, args = tokens[0], tokens[1:]
        try:
            if kind == "triple":
                if len(args) != 3:
                    raise RulesFileError("triple takes three relations", lineno)
                registry.declare_triple(*args)
            elif kind == "rule":
                if "=>" not in args:
                    raise RulesFileError("rule needs '=>'", lineno)
                cut = args.index("=>")
                head = _parse_atoms(args[cut + 1:], lineno)
                if len(head) != 1:
                    raise RulesFileError("rule head must be a single atom", lineno)
                registry.declare_rule(CompositionRule(tuple(_parse_atoms(args[:cut], lineno)), head[0]))
            elif kind == "alias":
                if len(args) != 2:
                    raise RulesFileError("alias takes a |concept| and a relation", lineno)
                registry.declare_alias(args[0], args[1])
            else:
                raise RulesFileError(f"unknown declaration {kind!r}", lineno)
        except RulesFileError:
            raise
        except (InferenceError, ConceptRefError) as exc:
            raise RulesFileError(str(exc), lineno) from None
    return registry


def resolve_relation_alias(concept: str | ConceptRef, registry: Registry) -> str:
    """The primitive relation a concept stands for."""
    ref = concept if isinstance(concept, ConceptRef) else parse_concept_ref(concept)
    key = str(ref.base())
    if key in registry.aliases:
        return registry.aliases[key]
    near = difflib.get_close_matches(key, sorted(registry.aliases), n=3, cutoff=0.0)
    hint = f"; nearest aliases: {', '.join('|' + n + '|' for n in near)}" if near else ""
    raise InferenceError(f"no relation alias for |{key}|{hint}")


# -- querying -----------------------------------------------------------------------

@dataclass(frozen=True)
class Fact:
    subject: str
    relation: str
    value: str
    provenance: str
    rule: CompositionRule | None = None
    premises: tuple["Fact", ...] = ()

    def trace_lines(self, indent: int = 0) -> list[str]:
        pad = "  " * indent
        tag = self.provenance if self.rule is None else f"derived by {self.rule}"
        lines = [f"{pad}|{self.subject}| {self.relation} |{self.value}|  [{tag}]"]
        for p in self.premises:
            lines += p.trace_lines(indent + 1)
        return lines


@dataclass
class ScratchContext:
    """Per-query table of solved goals, keyed by (unit, relation, height)."""
    solved: dict[tuple[str, str, int], dict[str, Fact]] = field(default_factory=dict)


class _Solver:
    def __init__(self, kb: KnowledgeBase, registry: Registry, inherit: bool):
        self.kb, self.registry, self.inherit = kb, registry, inherit
        self.scratch = ScratchContext()
        self._subjects: list[str] | None = None

    def subjects(self) -> list[str]:
        if self._subjects is None:
            self._subjects = [u for u, unit in self.kb.units.items() if unit.kind != "kb-class"]
        return self._subjects

    def base(self, x: str, r: str) -> dict[str, Fact]:
        out = {sv.value: Fact(x, r, sv.value, "explicit") for sv in self.kb.local_values(x, r)}
        if self.inherit:
            for sv in self.kb.inherited_values(x, r):
                if sv.value not in out:
                    out[sv.value] = Fact(x, r, sv.value, "inherited")
        return out

    def solve(self, x: str, r: str, height: int) -> dict[str, Fact]:
        key = (x, r, height)
        cached = self.scratch.solved.get(key)
        if cached is not None:
            return cached
        result = self.base(x, r) if height == 0 else dict(self.solve(x, r, height - 1))
        if height > 0:
            for rule in self.registry.rules_for(r):
                head = rule.head
                if isinstance(head.subject, Var):
                    start = {head.subject.name: x}
                elif head.subject == x:
                    start = {}
                else:
                    continue
                for binding, premises in self.match(rule.body, start, height - 1):
                    z = binding[head.object.name] if isinstance(head.object, Var) else head.object
                    if z not in result:
                        result[z] = Fact(x, r, z, "derived", rule, premises)
        self.scratch.solved[key] = result
        return result

    def match(self, body: tuple[Atom, ...], binding: dict[str, str],
              height: int) -> Iterator[tuple[dict[str, str], tuple[Fact, ...]]]:
        if not body:
            yield binding, ()
            return
        atom, rest = body[0], body[1:]
        if isinstance(atom.subject, Var) and atom.subject.name not in binding:
            subjects = self.subjects()
        else:
            subjects = [binding[atom.subject.name] if isinstance(atom.subject, Var) else atom.subject]
        for s in subjects:
            if s not in self.kb:
                continue
            for value, fact in self.solve(s, atom.relation, height).items():
                step = dict(binding)
                if isinstance(atom.subject, Var):
                    step[atom.subject.name] = s
                if isinstance(atom.object, Var):
                    if step.get(atom.object.name, value) != value:
                        continue
                    step[atom.object.name] = value
                elif atom.object != value:
                    continue
                for final, more in self.match(rest, step, height):
                    yield final, (fact,) + more


def query_relation(x: str, relation: str, kb: KnowledgeBase, registry: Registry | None = None,
                   deduce: bool = False, depth: int = DEFAULT_DEPTH,
                   inherit: bool = True) -> list[Fact]:
    """Values of ``relation`` on ``x``: explicit, then inherited, then derived."""
    kb.unit(x)
    kb.slot(relation)
    if not 1 <= depth <= MAX_DEPTH:
        raise InferenceError(f"depth limit must lie in 1..{MAX_DEPTH}")
    solver = _Solver(kb, registry or Registry(), inherit)
    # each height level costs a few stack frames (goal, body atoms)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 1000 + 12 * depth))
    try:
        facts = solver.solve(x, relation, depth if deduce else 0)
    finally:
        sys.setrecursionlimit(limit)
    return sorted(facts.values(), key=lambda f: PROVENANCE_RANK[f.provenance])


def replay(fact: Fact, kb: KnowledgeBase, registry: Registry) -> bool:
    """Check a derivation trace against the knowledge base and the rule set."""
    if fact.provenance == "explicit":
        return any(sv.value == fact.value for sv in kb.local_values(fact.subject, fact.relation))
    if fact.provenance == "inherited":
        return any(sv.value == fact.value for sv in kb.inherited_values(fact.subject, fact.relation))
    rule = fact.rule
    if rule is None or rule not in registry.rules_for(fact.relation):
        return False
    if len(rule.body) != len(fact.premises):
        return False
    binding: dict[str, str] = {}

    def bind(term: Term, value: str) -> bool:
        if isinstance(term, Var):
            return binding.setdefault(term.name, value) == value
        return term == value

    for atom, premise in zip(rule.body, fact.premises):
        if premise.relation != atom.relation:
            return False
        if not (bind(atom.subject, premise.subject) and bind(atom.object, premise.value)):
            return False
        if not replay(premise, kb, registry):
            return False
    return bind(rule.head.subject, fact.subject) and bind(rule.head.object, fact.value)

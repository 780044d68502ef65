"""Hierarchies of phrasal patterns with attached structure-building rules.

A pattern file holds global declarations followed by pattern blocks::

    determiner une DETERMINATION=UN GENRE=F
    function de qui que
    wordclass FINALITES ornement parure
    certainty DE OBJECTIF 0.9 FINALITES

    pattern np-de NOM < np-root
      match <DET:$det> <NOM:$head> de <NP:$obj>
      phrasal $head DE $obj
      slot DEF-CLASSIQUE $head det=$det

Elements are bare literals, quoted multi-word relators (``"sorte de"``),
gaps ``<POS:$var>`` and phrase captures ``<NP:$var>``, ``<VP:$var>``,
``<ADJP:$var>``.  Indented directive lines make up the rule that builds the
semantic structure once the pattern has matched.

Parsing is partial: a pattern only has to match a prefix of the sentence.
Among the matching patterns the deepest one in the hierarchy wins, then the
one covering the longest prefix, then the lowest id.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Protocol, Union

from .frames import KnowledgeBase
from .lexicon import UNKNOWN, normalize
from .schema import LEVEL_ATTRIBUTE_CLASS

DOMAINS = ("NOM", "VERBE", "ADJECTIF")
GAP_POS = ("NOM", "VERBE", "ADJECTIF", "ADVERBE", "DET", "FUNC")
PHRASE_KINDS = {"NP": "NOM", "VP": "VERBE", "ADJP": "ADJECTIF"}
GRAMMATICAL_FACETS = ("DETERMINATION", "GENRE", "NOMBRE", "MODE", "ASPECT", "TEMPS", "PERSONNE")

# slots written by the structural reading of phrase captures
NP_ADJECTIVE_SLOT = "EPITHETE"
NP_COMPLEMENT_SLOT = "DE"
VP_OBJECT_SLOT = "OBJET"

ELISIONS = {"d'": "de", "l'": "le", "qu'": "que", "n'": "ne", "s'": "se", "j'": "je", "c'": "ce"}


class PatternError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class SSCRError(RuntimeError):
    pass


# -- pattern elements -------------------------------------------------------

@dataclass(frozen=True)
class Literal:
    word: str


@dataclass(frozen=True)
class RelatorLiteral:
    words: tuple[str, ...]


@dataclass(frozen=True)
class Gap:
    pos: str
    var: str


@dataclass(frozen=True)
class PhraseCapture:
    var: str
    kind: str


PatternElem = Union[Literal, RelatorLiteral, Gap, PhraseCapture]


# -- rule actions -------------------------------------------------------------

@dataclass(frozen=True)
class SetDefSlot:
    slot: str
    var: str
    det_var: str | None = None
    facets: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class CreatePhrasal:
    head_var: str
    modifiers: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class SetCorrespondents:
    slot: str
    correspondents: tuple[tuple[str, float | None], ...]


@dataclass(frozen=True)
class SetGrammaticalFacets:
    slot: str
    facets: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class MarkAmbiguous:
    var: str


SSCRAction = Union[SetDefSlot, CreatePhrasal, SetCorrespondents, SetGrammaticalFacets, MarkAmbiguous]


@dataclass
class PatternNode:
    id: str
    parent: str | None
    domain: str
    elems: tuple[PatternElem, ...]
    sscr: tuple[SSCRAction, ...]
    line: int = 0

    @property
    def literal_prefix(self) -> tuple[str, ...]:
        words: list[str] = []
        for e in self.elems:
            if isinstance(e, Literal):
                words.append(e.word)
            elif isinstance(e, RelatorLiteral):
                words.extend(e.words)
            else:
                break
        return tuple(words)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(e.var for e in self.elems if isinstance(e, (Gap, PhraseCapture)))


@dataclass(frozen=True)
class CertaintyRule:
    slot: str
    relation: str
    certainty: float
    wordclass: str


@dataclass
class PatternHierarchy:
    patterns: dict[str, PatternNode]
    children: dict[str, list[str]]
    determiners: dict[str, dict[str, str]] = field(default_factory=dict)
    function_words: frozenset[str] = frozenset()
    wordclasses: dict[str, frozenset[str]] = field(default_factory=dict)
    certainty_rules: tuple[CertaintyRule, ...] = ()

    def roots(self, domain: str) -> list[str]:
        return sorted(p.id for p in self.patterns.values() if p.parent is None and p.domain == domain)

    def depth(self, pattern_id: str) -> int:
        d, node = 0, self.patterns[pattern_id]
        while node.parent is not None:
            d += 1
            node = self.patterns[node.parent]
        return d

    def is_closed(self, word: str) -> bool:
        w = word.lower()
        return w in self.determiners or w in self.function_words

    def certainties(self, slot: str, lemma: str) -> dict[str, float]:
        return {r.relation: r.certainty for r in self.certainty_rules
                if r.slot == slot and lemma in self.wordclasses.get(r.wordclass, ())}


# -- compilation ---------------------------------------------------------------

_ELEM_RE = re.compile(r'"[^"]*"|<[^>]*>|\S+')
_VAR_RE = re.compile(r"^\$[A-Za-z][\w-]*$")


def _facet_pairs(items: list[str], line: int) -> tuple[tuple[str, str], ...]:
    pairs = []
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key or not value:
            raise PatternError(f"expected KEY=VALUE, got {item!r}", line)
        pairs.append((key, value))
    return tuple(pairs)


def _var(token: str, line: int) -> str:
    if not _VAR_RE.match(token):
        raise PatternError(f"expected a $variable, got {token!r}", line)
    return token[1:]


def _parse_elems(text: str, line: int) -> tuple[PatternElem, ...]:
    elems: list[PatternElem] = []
    for tok in _ELEM_RE.findall(text):
        if tok.startswith('"'):
            words = tuple(tokenize(tok[1:-1]))
            if not words:
                raise PatternError("empty relator literal", line)
            elems.append(RelatorLiteral(tuple(_norm(w) for w in words)))
        elif tok.startswith("<"):
            kind, sep, var = tok[1:-1].partition(":")
            if not sep:
                raise PatternError(f"element {tok} needs KIND:$var", line)
            name = _var(var, line)
            if kind in PHRASE_KINDS:
                elems.append(PhraseCapture(name, kind))
            elif kind in GAP_POS:
                elems.append(Gap(kind, name))
            else:
                raise PatternError(f"unknown element category {kind!r}", line)
        else:
            elems.append(Literal(_norm(tok)))
    if not elems:
        raise PatternError("pattern has no elements", line)
    return tuple(elems)


def _parse_action(words: list[str], line: int) -> SSCRAction:
    verb, args = words[0], words[1:]
    if verb == "slot":
        if len(args) < 2:
            raise PatternError("slot needs SLOT $var", line)
        det = None
        rest = []
        for a in args[2:]:
            if a.startswith("det="):
                det = _var(a[4:], line)
            else:
                rest.append(a)
        return SetDefSlot(args[0], _var(args[1], line), det, _facet_pairs(rest, line))
    if verb == "phrasal":
        if not args or len(args) % 2 != 1:
            raise PatternError("phrasal needs $head followed by SLOT $var pairs", line)
        mods = tuple((args[i], _var(args[i + 1], line)) for i in range(1, len(args), 2))
        return CreatePhrasal(_var(args[0], line), mods)
    if verb == "correspondents":
        if len(args) < 2:
            raise PatternError("correspondents needs SLOT and at least one relation", line)
        corr = []
        for a in args[1:]:
            rel, sep, cert = a.partition(":")
            try:
                value = float(cert) if sep else None
            except ValueError:
                raise PatternError(f"bad certainty in {a!r}", line) from None
            if value is not None and not 0.0 <= value <= 1.0:
                raise PatternError(f"certainty outside [0, 1] in {a!r}", line)
            corr.append((rel, value))
        return SetCorrespondents(args[0], tuple(corr))
    if verb == "facets":
        if len(args) < 2:
            raise PatternError("facets needs SLOT and KEY=VALUE pairs", line)
        return SetGrammaticalFacets(args[0], _facet_pairs(args[1:], line))
    if verb == "ambiguous":
        if len(args) != 1:
            raise PatternError("ambiguous takes one $var", line)
        return MarkAmbiguous(_var(args[0], line))
    raise PatternError(f"unknown directive {verb!r}", line)


def compile_hierarchy(text: str) -> PatternHierarchy:
    """Compile and validate a pattern file."""
    patterns: dict[str, PatternNode] = {}
    determiners: dict[str, dict[str, str]] = {}
    function_words: set[str] = set()
    wordclasses: dict[str, frozenset[str]] = {}
    rules: list[tuple[CertaintyRule, int]] = []
    current: dict[str, Any] | None = None
    blocks: list[dict[str, Any]] = []

    for lineno, raw in enumerate(normalize(text).splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        words = stripped.split()
        if raw[0].isspace():
            if current is None:
                raise PatternError("indented directive outside a pattern block", lineno)
            if words[0] == "match":
                if current["elems"] is not None:
                    raise PatternError("pattern has two match lines", lineno)
                current["elems"] = _parse_elems(stripped[len("match"):], lineno)
            else:
                current["sscr"].append(_parse_action(words, lineno))
            continue
        current = None
        head = words[0]
        if head == "pattern":
            if len(words) not in (3, 5) or (len(words) == 5 and words[3] != "<"):
                raise PatternError("expected: pattern ID DOMAIN [< PARENT]", lineno)
            if words[2] not in DOMAINS:
                raise PatternError(f"unknown domain {words[2]!r}", lineno)
            current = {"id": words[1], "domain": words[2], "parent": words[4] if len(words) == 5 else None,
                       "elems": None, "sscr": [], "line": lineno}
            blocks.append(current)
        elif head == "determiner":
            if len(words) < 2:
                raise PatternError("determiner needs a word", lineno)
            determiners[words[1].lower()] = dict(_facet_pairs(words[2:], lineno))
        elif head == "function":
            function_words.update(w.lower() for w in words[1:])
        elif head == "wordclass":
            if len(words) < 3:
                raise PatternError("wordclass needs a name and words", lineno)
            wordclasses[words[1]] = frozenset(words[2:])
        elif head == "certainty":
            if len(words) != 5:
                raise PatternError("expected: certainty SLOT RELATION VALUE WORDCLASS", lineno)
            try:
                value = float(words[3])
            except ValueError:
                raise PatternError(f"bad certainty {words[3]!r}", lineno) from None
            if not 0.0 <= value <= 1.0:
                raise PatternError("certainty outside [0, 1]", lineno)
            rules.append((CertaintyRule(words[1], words[2], value, words[4]), lineno))
        else:
            raise PatternError(f"unknown declaration {head!r}", lineno)

    for block in blocks:
        if block["id"] in patterns:
            raise PatternError(f"duplicate pattern id {block['id']!r}", block["line"])
        if block["elems"] is None:
            raise PatternError(f"pattern {block['id']} has no match line", block["line"])
        patterns[block["id"]] = PatternNode(block["id"], block["parent"], block["domain"],
                                            block["elems"], tuple(block["sscr"]), block["line"])
    for rule, lineno in rules:
        if rule.wordclass not in wordclasses:
            raise PatternError(f"unknown wordclass {rule.wordclass!r}", lineno)

    children: dict[str, list[str]] = {pid: [] for pid in patterns}
    for node in patterns.values():
        _validate_node(node)
        if node.parent is None:
            continue
        if node.parent not in patterns:
            raise PatternError(f"pattern {node.id}: unknown parent {node.parent!r}", node.line)
        parent = patterns[node.parent]
        if parent.domain != node.domain:
            raise PatternError(f"pattern {node.id}: domain differs from parent {parent.id}", node.line)
        prefix = parent.literal_prefix
        if node.literal_prefix[:len(prefix)] != prefix:
            raise PatternError(f"pattern {node.id} does not refine the literal prefix of {parent.id}",
                               node.line)
        children[node.parent].append(node.id)
    for node in patterns.values():
        seen = {node.id}
        walk = node.parent
        while walk is not None:
            if walk in seen:
                raise PatternError(f"pattern hierarchy cycle through {node.id}", node.line)
            seen.add(walk)
            walk = patterns[walk].parent
    for kids in children.values():
        kids.sort()
    return PatternHierarchy(patterns, children, determiners, frozenset(function_words),
                            wordclasses, tuple(r for r, _ in rules))


def _validate_node(node: PatternNode) -> None:
    names = node.variables
    if len(names) != len(set(names)):
        raise PatternError(f"pattern {node.id}: binding variable used twice", node.line)
    bound = set(names)
    written = set()
    for action in node.sscr:
        used: list[str] = []
        if isinstance(action, SetDefSlot):
            used = [action.var] + ([action.det_var] if action.det_var else [])
            written.add(action.slot)
        elif isinstance(action, CreatePhrasal):
            used = [action.head_var] + [v for _, v in action.modifiers]
        elif isinstance(action, MarkAmbiguous):
            used = [action.var]
        elif action.slot not in written:
            raise PatternError(f"pattern {node.id}: {type(action).__name__} on slot {action.slot} "
                               "which this rule does not set", node.line)
        for var in used:
            if var not in bound:
                raise PatternError(f"pattern {node.id}: SSCR references unbound ${var}", node.line)


# -- tokens and matching ---------------------------------------------------------

_TOKEN_RE = re.compile(r"\w+'|\w+(?:-\w+)*|[^\w\s]")


def tokenize(text: str) -> list[str]:
    """Split a definition into word tokens; elided articles become their own token."""
    text = normalize(text).replace("’", "'")
    return _TOKEN_RE.findall(text)


def _norm(word: str) -> str:
    w = word.lower()
    return ELISIONS.get(w, w)


@dataclass(frozen=True)
class Token:
    word: str
    tags: frozenset[str]

    @property
    def norm(self) -> str:
        return _norm(self.word)


class Tagger(Protocol):
    def tags(self, token: str) -> frozenset[str]: ...


def tag_tokens(words: list[str], hierarchy: PatternHierarchy, lexicon: Tagger) -> list[Token]:
    """POS tags come from the lexicon; closed words from the pattern file."""
    tokens = []
    for w in words:
        low = w.lower()
        if low in hierarchy.determiners:
            tags = frozenset({"DET"})
        elif low in hierarchy.function_words:
            tags = frozenset({"FUNC"})
        elif not re.match(r"\w", w):
            tags = frozenset({"PUNCT"})
        else:
            tags = lexicon.tags(w)
        tokens.append(Token(w, tags))
    return tokens


@dataclass(frozen=True)
class Phrase:
    kind: str
    head: int
    start: int
    end: int
    det: int | None = None
    modifiers: tuple[tuple[str, "Phrase"], ...] = ()


@dataclass
class MatchResult:
    pattern_id: str | None
    bindings: dict[str, tuple[int, int]]
    matched_prefix_length: int
    success: bool
    tokens: list[Token] = field(default_factory=list)
    phrases: dict[str, Phrase] = field(default_factory=dict)

    def text(self, var: str) -> str:
        start, end = self.bindings[var]
        return join_words([t.word for t in self.tokens[start:end]])


def join_words(words: list[str]) -> str:
    out = ""
    for w in words:
        if out and not out.endswith("'") and w not in ",.;:":
            out += " "
        out += w
    return out


def _fits(tokens: list[Token], i: int, pos: str) -> bool:
    if i >= len(tokens):
        return False
    tags = tokens[i].tags
    if pos in ("DET", "FUNC"):
        return pos in tags
    if tags & {"DET", "FUNC", "PUNCT"}:
        return False
    return pos in tags or UNKNOWN in tags


def _parse_np(tokens: list[Token], i: int) -> Phrase | None:
    j, det = i, None
    if _fits(tokens, j, "DET"):
        det, j = j, j + 1
    if not _fits(tokens, j, "NOM"):
        return None
    head, j = j, j + 1
    mods: list[tuple[str, Phrase]] = []
    while _fits(tokens, j, "ADJECTIF"):
        mods.append((NP_ADJECTIVE_SLOT, Phrase("ADJP", j, j, j + 1)))
        j += 1
    if j < len(tokens) and tokens[j].norm == "de":
        sub = _parse_np(tokens, j + 1)
        if sub is not None:
            mods.append((NP_COMPLEMENT_SLOT, sub))
            j = sub.end
    return Phrase("NP", head, i, j, det, tuple(mods))


def _parse_phrase(kind: str, tokens: list[Token], i: int) -> Phrase | None:
    if kind == "NP":
        return _parse_np(tokens, i)
    if kind == "ADJP":
        return Phrase("ADJP", i, i, i + 1) if _fits(tokens, i, "ADJECTIF") else None
    if not _fits(tokens, i, "VERBE"):
        return None
    obj = _parse_np(tokens, i + 1)
    if obj is None:
        return Phrase("VP", i, i, i + 1)
    return Phrase("VP", i, i, obj.end, None, ((VP_OBJECT_SLOT, obj),))


def _match_elems(node: PatternNode, tokens: list[Token]):
    i = 0
    bindings: dict[str, tuple[int, int]] = {}
    phrases: dict[str, Phrase] = {}
    for e in node.elems:
        if isinstance(e, Literal):
            if i >= len(tokens) or tokens[i].norm != e.word:
                return None
            i += 1
        elif isinstance(e, RelatorLiteral):
            for w in e.words:
                if i >= len(tokens) or tokens[i].norm != w:
                    return None
                i += 1
        elif isinstance(e, Gap):
            if not _fits(tokens, i, e.pos):
                return None
            bindings[e.var] = (i, i + 1)
            i += 1
        else:
            phrase = _parse_phrase(e.kind, tokens, i)
            if phrase is None:
                return None
            bindings[e.var] = (phrase.start, phrase.end)
            phrases[e.var] = phrase
            i = phrase.end
    return bindings, phrases, i


def match_definition(tokens: list[Token], hierarchy: PatternHierarchy, domain: str) -> MatchResult:
    """Find the most specific pattern matching a prefix of the sentence."""
    candidates = []

    def explore(pid: str, depth: int) -> None:
        got = _match_elems(hierarchy.patterns[pid], tokens)
        if got is None:
            return
        candidates.append((depth, got[2], pid, got))
        for child in hierarchy.children[pid]:
            explore(child, depth + 1)

    for root in hierarchy.roots(domain):
        explore(root, 0)
    if not candidates:
        return MatchResult(None, {}, 0, False, list(tokens))
    depth, length, pid, (bindings, phrases, _) = min(candidates, key=lambda c: (-c[0], -c[1], c[2]))
    return MatchResult(pid, bindings, length, length >= 1, list(tokens), phrases)


# -- structure construction ---------------------------------------------------------

class BuildContext(Protocol):
    """What the rule executor needs from the knowledge-base builder."""

    def resolve(self, word: str, pos: str, keep_ambiguous: bool = False) -> str: ...

    def lemma(self, word: str, pos: str) -> str: ...

    def new_phrasal(self, head: str, pos: str, text: str) -> str: ...


def correspondent_facets(kb: KnowledgeBase, slot: str, target_lemma: str | None,
                         hierarchy: PatternHierarchy,
                         explicit: tuple[tuple[str, float | None], ...] | None = None) -> dict[str, Any]:
    corr = explicit if explicit is not None else kb.slot(slot).correspondents
    if not corr:
        return {}
    facets: dict[str, Any] = {"RELATIONNELS-CORRESPONDANTS": ", ".join(r for r, _ in corr)}
    for rel, cert in corr:
        if cert is not None:
            facets[rel] = cert
    if target_lemma is not None:
        for rel, cert in hierarchy.certainties(slot, target_lemma).items():
            if any(r == rel for r, _ in corr):
                facets[rel] = cert
    return facets


class _Executor:
    def __init__(self, match: MatchResult, kb: KnowledgeBase, hierarchy: PatternHierarchy,
                 context: BuildContext):
        self.match, self.kb, self.h, self.ctx = match, kb, hierarchy, context
        self.node = hierarchy.patterns[match.pattern_id]
        self.gap_pos = {e.var: e.pos for e in self.node.elems if isinstance(e, Gap)}
        self.ambiguous = {a.var for a in self.node.sscr if isinstance(a, MarkAmbiguous)}
        self.values: dict[str, str] = {}
        self.touched: list[str] = []

    def _det_facets(self, index: int | None) -> dict[str, str]:
        if index is None:
            return {}
        return dict(self.h.determiners.get(self.match.tokens[index].word.lower(), {}))

    def head_token(self, var: str) -> tuple[int, str]:
        if var in self.match.phrases:
            phrase = self.match.phrases[var]
            return phrase.head, PHRASE_KINDS[phrase.kind]
        return self.match.bindings[var][0], self.gap_pos[var]

    def lemma_of(self, var: str) -> str:
        index, pos = self.head_token(var)
        return self.ctx.lemma(self.match.tokens[index].word, pos)

    def det_of(self, var: str) -> dict[str, str]:
        phrase = self.match.phrases.get(var)
        return self._det_facets(phrase.det) if phrase else {}

    def value(self, var: str) -> str:
        if var not in self.values:
            if var in self.match.phrases:
                self.values[var] = self.build_phrase(self.match.phrases[var], var in self.ambiguous)
            else:
                index, pos = self.head_token(var)
                if pos in ("DET", "FUNC"):
                    raise SSCRError(f"${var} is bound to a closed word and cannot be a concept")
                uid = self.ctx.resolve(self.match.tokens[index].word, pos, var in self.ambiguous)
                self.values[var] = uid
                self.touched.append(uid)
        return self.values[var]

    def _phrasal_text(self, head: int, end: int, pos: str) -> str:
        words = [self.ctx.lemma(self.match.tokens[head].word, pos)]
        words += [t.word for t in self.match.tokens[head + 1:end]]
        return join_words(words)

    def _add_modifier(self, phrasal: str, slot: str, target: str, target_lemma: str,
                      det: dict[str, str]) -> None:
        facets: dict[str, Any] = {"CLASSE-ATTRIBUT": LEVEL_ATTRIBUTE_CLASS[self.kb.slot(slot).level]}
        facets.update(det)
        facets.update(correspondent_facets(self.kb, slot, target_lemma, self.h))
        self.kb.add_value(phrasal, slot, target, facets)

    def build_phrase(self, phrase: Phrase, keep_ambiguous: bool = False) -> str:
        pos = PHRASE_KINDS[phrase.kind]
        word = self.match.tokens[phrase.head].word
        head = self.ctx.resolve(word, pos, keep_ambiguous)
        self.touched.append(head)
        if not phrase.modifiers:
            return head
        phrasal = self.ctx.new_phrasal(head, pos, self._phrasal_text(phrase.head, phrase.end, pos))
        self.touched.append(phrasal)
        for slot, sub in phrase.modifiers:
            target = self.build_phrase(sub)
            sub_lemma = self.ctx.lemma(self.match.tokens[sub.head].word, PHRASE_KINDS[sub.kind])
            self._add_modifier(phrasal, slot, target, sub_lemma, self._det_facets(sub.det))
        return phrasal

    def create_phrasal(self, action: CreatePhrasal) -> None:
        if not action.modifiers:
            self.value(action.head_var)
            return
        head_index, pos = self.head_token(action.head_var)
        head = self.value(action.head_var)
        end = max([self.match.bindings[action.head_var][1]] +
                  [self.match.bindings[v][1] for _, v in action.modifiers])
        phrasal = self.ctx.new_phrasal(head, pos, self._phrasal_text(head_index, end, pos))
        self.touched.append(phrasal)
        for slot, var in action.modifiers:
            target = self.value(var)
            self._add_modifier(phrasal, slot, target, self.lemma_of(var), self.det_of(var))
        self.values[action.head_var] = phrasal

    def run(self, definiendum: str) -> list[str]:
        pending: list[dict[str, Any]] = []
        for action in self.node.sscr:
            if isinstance(action, CreatePhrasal):
                self.create_phrasal(action)
            elif isinstance(action, SetDefSlot):
                try:
                    level = self.kb.slot(action.slot).level
                except Exception as exc:
                    raise SSCRError(f"pattern {self.node.id}: {exc}") from None
                facets: dict[str, Any] = {"CLASSE-ATTRIBUT": LEVEL_ATTRIBUTE_CLASS.get(level, "DEFINITOIRES")}
                facets.update(self._det_facets(self.match.bindings[action.det_var][0])
                              if action.det_var else self.det_of(action.var))
                facets.update(action.facets)
                pending.append({"slot": action.slot, "value": self.value(action.var), "facets": facets,
                                "lemma": self.lemma_of(action.var), "corr": None})
            elif isinstance(action, SetCorrespondents):
                for item in pending:
                    if item["slot"] == action.slot:
                        item["corr"] = action.correspondents
            elif isinstance(action, SetGrammaticalFacets):
                for item in pending:
                    if item["slot"] == action.slot:
                        item["facets"].update(action.facets)
        for item in pending:
            facets = item["facets"]
            facets.update(correspondent_facets(self.kb, item["slot"], item["lemma"], self.h, item["corr"]))
            self.kb.add_value(definiendum, item["slot"], item["value"], facets)
        self.touched.append(definiendum)
        return list(dict.fromkeys(self.touched))


def apply_sscr(match: MatchResult, definiendum: str, kb: KnowledgeBase,
               hierarchy: PatternHierarchy, context: BuildContext) -> list[str]:
    """Run the matched pattern's rule; returns the units created or updated."""
    if not match.success or match.pattern_id is None:
        raise SSCRError("cannot build structure from a failed match")
    kb.unit(definiendum)
    return _Executor(match, kb, hierarchy, context).run(definiendum)

"""Reference implementations the library is checked against.

Everything here works on plain sets and dicts and reads unit data directly,
so it shares no logic with the code under test.
"""
from __future__ import annotations

import random
from itertools import product

import numpy as np

# -- rule evaluation -----------------------------------------------------------

Triple = tuple[str, str, str]


def _unify(term, value, binding):
    """Bind ``term`` (variable name prefixed with '?' or a constant) to ``value``."""
    if isinstance(term, str) and term.startswith("?"):
        if binding.get(term, value) != value:
            return None
        out = dict(binding)
        out[term] = value
        return out
    return binding if term == value else None


def _join(body, sources, binding):
    if not body:
        yield binding
        return
    (s, r, o), facts = body[0], sources[0]
    for fs, fr, fo in facts:
        if fr != r:
            continue
        b = _unify(s, fs, binding)
        if b is None:
            continue
        b = _unify(o, fo, b)
        if b is not None:
            yield from _join(body[1:], sources[1:], b)


def _instantiate(term, binding):
    return binding[term] if isinstance(term, str) and term.startswith("?") else term


def seminaive_fixpoint(facts: set[Triple], rules) -> tuple[set[Triple], int]:
    """Least fixpoint of ``rules`` over ``facts`` and the number of productive rounds.

    A rule is ``(body, head)`` where atoms are ``(subject, relation, object)``
    and variables are strings starting with '?'.
    """
    known = set(facts)
    delta = set(facts)
    rounds = 0
    while delta:
        fresh: set[Triple] = set()
        for body, head in rules:
            # at least one premise must come from the previous round
            for i in range(len(body)):
                sources = [known] * len(body)
                sources[i] = delta
                for b in _join(list(body), sources, {}):
                    fact = (_instantiate(head[0], b), head[1], _instantiate(head[2], b))
                    if fact not in known:
                        fresh.add(fact)
        if not fresh:
            break
        rounds += 1
        known |= fresh
        delta = fresh
    return known, rounds


def triple_rule(r1: str, r2: str, r3: str):
    return ((("?x", r1, "?y"), ("?y", r2, "?z")), ("?x", r3, "?z"))


# -- synonymy --------------------------------------------------------------------

def symmetric_transitive_closure(n: int, edges) -> set[tuple[int, int]]:
    """All ordered pairs (i, j), i != j, joined by an undirected path."""
    reach = np.eye(n, dtype=bool)
    for a, b in edges:
        reach[a, b] = reach[b, a] = True
    while True:
        nxt = (reach.astype(np.int64) @ reach.astype(np.int64)) > 0
        if (nxt == reach).all():
            break
        reach = nxt
    return {(i, j) for i, j in zip(*np.nonzero(reach)) if i != j}


# -- knowledge-base walkers -------------------------------------------------------

CONCEPT_KINDS = {"concept", "phrasal-concept", "reference"}


def ancestors(kb, uid: str) -> set[str]:
    seen: set[str] = set()
    frontier = list(kb.units[uid].parents)
    while frontier:
        node = frontier.pop()
        if node not in seen:
            seen.add(node)
            frontier.extend(kb.units[node].parents)
    return seen


def has_cycle(kb) -> bool:
    state: dict[str, int] = {}

    def visit(uid: str) -> bool:
        state[uid] = 1
        for p in kb.units[uid].parents:
            if state.get(p) == 1 or (p not in state and visit(p)):
                return True
        state[uid] = 2
        return False

    return any(uid not in state and visit(uid) for uid in kb.units)


def inverse_gaps(kb) -> list[str]:
    """Arcs whose mirror is missing, including parent/child bookkeeping."""
    gaps = []
    for uid, unit in kb.units.items():
        for p in unit.parents:
            if uid not in kb.children(p):
                gaps.append(f"{uid} SUBCLASS.OF {p}")
        for slot, values in unit.slots.items():
            d = kb.slot_definitions[slot]
            if d.value_kind != "unit-ref" or not d.inverse:
                continue
            for v in values:
                back = kb.units[v.value].slots.get(d.inverse, [])
                if not any(w.value == uid for w in back):
                    gaps.append(f"{uid} {slot} {v.value}")
    return gaps


def union_mismatches(kb) -> list[str]:
    """UNION slots whose inherited values differ from a brute ancestor union."""
    bad = []
    union_slots = [n for n, d in kb.slot_definitions.items()
                   if d.role == "UNION" and not d.taxonomic]
    for uid in kb.units:
        chain = {uid} | ancestors(kb, uid)
        for slot in union_slots:
            expected = {v.value for node in chain for v in kb.units[node].slots.get(slot, [])}
            got = [v.value for v in kb.inherited_values(uid, slot)]
            if set(got) != expected or len(got) != len(set(got)):
                bad.append(f"{uid} {slot}")
    return bad


def inhibited_leaks(kb, slot: str = "SYNONYMES") -> list[str]:
    """Units whose inherited view of an INHIBIT slot is not exactly their own values."""
    return [uid for uid, unit in kb.units.items()
            if [v.value for v in kb.inherited_values(uid, slot)]
            != [v.value for v in unit.slots.get(slot, [])]]


def arc_count(kb) -> int:
    """Directed relational arcs: stored unit references plus both taxonomy directions."""
    total = 0
    for uid, unit in kb.units.items():
        for slot, values in unit.slots.items():
            d = kb.slot_definitions[slot]
            if d.level == "relational" and d.value_kind == "unit-ref":
                total += len(values)
        if unit.kind in CONCEPT_KINDS:
            # one HYPERONYME arc up and one HYPONYME arc back down
            total += 2 * sum(1 for p in unit.parents if kb.units[p].kind in CONCEPT_KINDS)
    return total


# -- corpora -------------------------------------------------------------------------

NOUNS = ["arbre", "fleur", "plante", "outil", "couteau", "lame", "table", "meuble", "bois",
         "métal", "pièce", "objet", "ornement", "maison", "toit", "partie", "tout", "vase"]
VERBS = ["couper", "orner", "ajuster", "rendre", "porter", "tenir", "fixer", "polir"]
ADJS = ["plat", "uni", "égal", "lisse", "droit", "juste", "public", "commun", "beau", "joli"]

NOUN_FORMS = ["un {n}", "une {n}", "un {n} de {n2}", "une {n} {a}", "sorte de {n} {a}",
              "espèce de {n}", "ce qui {v}", "qui {v} des {n2}s", "un {n} d'{n2}",
              "{a} et {a2}", "rendre {a}"]
VERB_FORMS = ["rendre {a}", "{v} un {n}", "{v}", "rendre {a} un {n}"]
ADJ_FORMS = ["{a}", "{a}, {a2}", "{a} ou {a2}", "qui est {a}"]


def fuzz_corpus(seed: int, size: int = 14) -> str:
    """A random lexicon in the shipped file format.

    Homograph and sense numbers collide on purpose so that ambiguous
    references appear; some definitions are left empty or ungrammatical.
    """
    rng = random.Random(seed)
    lines = ["# fuzzed corpus"]
    used: set[tuple[str, str, int]] = set()
    while len(lines) < size + 1:
        pos = rng.choice(["NOM", "NOM", "VERBE", "ADJECTIF"])
        word = rng.choice({"NOM": NOUNS, "VERBE": VERBS, "ADJECTIF": ADJS}[pos])
        hom, sense = rng.choice(["I", "I", "II"]), rng.choice([1, 1, 2])
        if (word, hom, sense) in used:
            continue
        used.add((word, hom, sense))
        forms = {"NOM": NOUN_FORMS, "VERBE": VERB_FORMS, "ADJECTIF": ADJ_FORMS}[pos]
        fill = dict(n=rng.choice(NOUNS), n2=rng.choice(NOUNS), v=rng.choice(VERBS),
                    a=rng.choice(ADJS), a2=rng.choice(ADJS))
        roll = rng.random()
        if roll < 0.08:
            definition = ""
        elif roll < 0.15:
            definition = " ".join(rng.choice(NOUNS + VERBS + ["le", "et"]) for _ in range(3))
        else:
            definition = rng.choice(forms).format(**fill)
        lines.append(f"{word}|{hom}|{sense}|{pos}|{definition}|")
    if rng.random() < 0.5:
        lines += _sense_trio(rng, {w for w, _, _ in used})
    return "\n".join(lines) + "\n"


def _sense_trio(rng: random.Random, taken: set[str]) -> list[str]:
    """Two senses of a matter noun under different genera plus a user sharing one genus.

    The user's promoted MATIERE arc points at the ambiguous |w I ?| unit,
    which disambiguation can settle.
    """
    word = rng.choice([w for w in ("métal", "bois") if w not in taken] or ["fer"])
    source = rng.choice([n for n in NOUNS if n not in taken and n != word])
    g1, g2 = rng.sample([n for n in NOUNS if n not in (word, source)], 2)
    return [f"{word}|I|1|NOM|un {g1}|", f"{word}|I|2|NOM|un {g2}|",
            f"{source}|I|1|NOM|un {g1} de {word}|"]


def random_graph(seed: int, relations=("R0", "R1", "R2")):
    """Nodes, explicit facts and up to four composition triples."""
    rng = random.Random(seed)
    n = rng.randint(2, 12)
    nodes = [f"n{i}" for i in range(n)]
    facts = {(rng.choice(nodes), rng.choice(relations), rng.choice(nodes))
             for _ in range(rng.randint(1, 2 * n))}
    triples = list(dict.fromkeys(
        tuple(rng.choice(relations) for _ in range(3)) for _ in range(rng.randint(1, 4))))
    return nodes, facts, triples


def random_synonym_graph(seed: int):
    rng = random.Random(seed)
    n = rng.randint(1, 20)
    pairs = [(a, b) for a, b in product(range(n), repeat=2) if a < b]
    edges = rng.sample(pairs, rng.randint(0, min(len(pairs), n + 3))) if pairs else []
    return n, edges

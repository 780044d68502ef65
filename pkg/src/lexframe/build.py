"""Construction of the dictionary knowledge base from lexicon records."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable

from . import frames
from .frames import CONCEPT_KINDS, CycleError, DuplicateError, FrameError, KnowledgeBase
from .lexicon import ConceptRef, EntryRecord, LexiconIndex, parse_concept_ref
from .patterns import (DOMAINS, PatternHierarchy, SSCRError, apply_sscr, match_definition,
                       tag_tokens, tokenize)
from .schema import (DEF_SLOTS, DEFINED_BY, HYPERNYM, KIND_OF, CANDIDATES, PHRASAL_CLASS,
                     POS_CLASS, SEMANTIC_CLASS, assert_relation)

log = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.75
INFO = {"CLASSE-ATTRIBUT": "INFO-GENERALE"}


@dataclass
class BuildReport:
    entries: int = 0
    concepts: int = 0
    phrasal: int = 0
    references: int = 0
    ambiguous: int = 0
    arcs: int = 0
    unparsed: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"entries": self.entries, "concepts": self.concepts, "phrasal": self.phrasal,
                "references": self.references, "ambiguous": self.ambiguous, "arcs": self.arcs,
                "unparsed": list(self.unparsed), "errors": list(self.errors)}

    def render(self) -> str:
        lines = [f"entries={self.entries} concepts={self.concepts} phrasal={self.phrasal} "
                 f"references={self.references} ambiguous={self.ambiguous} arcs={self.arcs}"]
        lines += [f"unparsed: |{uid}|" for uid in self.unparsed]
        lines += [f"error: {e}" for e in self.errors]
        return "\n".join(lines)


def is_ambiguous(kb: KnowledgeBase, uid: str) -> bool:
    return any(m in frames.AMBIGUITY_CLASSES for m in kb.unit(uid).memberships)


def count_units(kb: KnowledgeBase) -> BuildReport:
    report = BuildReport()
    for uid, unit in kb.units.items():
        if unit.kind == "entry":
            report.entries += 1
        elif unit.kind == "phrasal-concept":
            report.phrasal += 1
        elif unit.kind == "reference":
            report.references += 1
        elif unit.kind == "concept":
            if is_ambiguous(kb, uid):
                report.ambiguous += 1
            else:
                report.concepts += 1
    report.arcs = sum(1 for _ in kb.arcs())
    return report


# -- units ----------------------------------------------------------------------

def build_concept(record: EntryRecord, kb: KnowledgeBase) -> str:
    """Create the sense unit for a record; an empty definition gives a reference stub."""
    uid = str(record.ref)
    if uid in kb:
        raise DuplicateError(f"concept |{uid}| already exists")
    parents = [SEMANTIC_CLASS[record.pos]] if record.pos in SEMANTIC_CLASS else []
    if not record.definition:
        kb.create_unit(uid, "reference", parents, [frames.REFERENCES], record.pos)
        return uid
    kb.create_unit(uid, "concept", parents, [POS_CLASS[record.pos]], record.pos)
    kb.add_value(uid, "GROUPE-CATEGORIEL", record.pos, INFO)
    kb.add_value(uid, "TEXTE-DEFINITION", record.definition, INFO)
    if record.usage:
        kb.add_value(uid, "USAGE", record.usage, INFO)
    return uid


def build_entry(record: EntryRecord, kb: KnowledgeBase) -> str:
    """Entry unit for the headword, linked to the record's sense by SENS/MOTS-ENTREE."""
    entry = record.headword
    if entry not in kb:
        kb.create_unit(entry, "entry", [], [frames.ENTRIES])
    elif kb.unit(entry).kind != "entry":
        raise DuplicateError(f"|{entry}| exists and is not an entry")
    concept = str(record.ref)
    if concept not in kb:
        build_concept(record, kb)
    kb.add_value(entry, "SENS", concept)
    return entry


def _candidates(kb: KnowledgeBase, ref: ConceptRef) -> list[str]:
    found = []
    for uid, unit in kb.units.items():
        if unit.kind != "concept" or is_ambiguous(kb, uid):
            continue
        try:
            other = parse_concept_ref(uid)
        except ValueError:
            continue
        if other.headword != ref.headword or other.occurrence is not None:
            continue
        if ref.homograph != "?" and other.homograph != ref.homograph:
            continue
        if isinstance(ref.sense, tuple) and other.sense not in ref.sense:
            continue
        found.append(uid)
    return found


def ensure_reference(ref: ConceptRef, kb: KnowledgeBase, pos: str | None = None) -> str:
    """Existing unit for the reference, or a new REFERENCES / ambiguity unit."""
    uid = str(ref.base())
    if uid in kb:
        return uid
    parents = [SEMANTIC_CLASS[pos]] if pos in SEMANTIC_CLASS else []
    if ref.resolved:
        kb.create_unit(uid, "reference", parents, [frames.REFERENCES], pos)
        return uid
    kb.create_unit(uid, "concept", parents, [ref.ambiguity], pos)
    for candidate in _candidates(kb, ref):
        kb.add_value(uid, CANDIDATES, candidate, INFO)
    return uid


# -- promotion and transfer ------------------------------------------------------

def promotion_candidates(kb: KnowledgeBase, uid: str, threshold: float) -> list[tuple[str, str]]:
    pairs = []
    for slot, values in kb.unit(uid).slots.items():
        definition = kb.slot_definitions.get(slot)
        if definition is None or definition.level not in ("definitory", "syntagmatic"):
            continue
        for sv in values:
            listed = sv.facets.get("RELATIONNELS-CORRESPONDANTS")
            if not listed:
                continue
            relations = [r.strip() for r in str(listed).split(",") if r.strip()]
            for rel in relations:
                certainty = sv.facets.get(rel)
                if certainty is None:
                    accepted = len(relations) == 1
                else:
                    accepted = float(certainty) >= threshold
                if accepted and rel in kb.slot_definitions:
                    pairs.append((rel, sv.value))
    return pairs


def promote(uid: str, threshold: float, kb: KnowledgeBase) -> list[tuple[str, str]]:
    """Assert the relational counterparts of definitory values at or above threshold."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must lie in [0, 1]")
    done = []
    for rel, value in promotion_candidates(kb, uid, threshold):
        try:
            assert_relation(kb, uid, rel, value)
        except CycleError as exc:
            log.info("promotion of %s skipped: %s", rel, exc)
            continue
        done.append((rel, value))
    return done


def transfer_definiens(uid: str, kb: KnowledgeBase, threshold: float = DEFAULT_THRESHOLD) -> list[str]:
    """Copy what the defining phrasal says onto the concept it defines."""
    phrasals = [(slot, sv.value) for slot in ("DEF-CLASSIQUE", "DEF-SORTED")
                for sv in kb.local_values(uid, slot)
                if kb.unit(sv.value).kind == "phrasal-concept"]
    if not phrasals:
        raise FrameError(f"|{uid}| has no phrasal definiens")
    for slot, phrasal in phrasals:
        assert_relation(kb, uid, DEFINED_BY, phrasal)
        for head in kb.concept_parents(phrasal):
            try:
                assert_relation(kb, uid, HYPERNYM, head)
            except CycleError as exc:
                log.info("genus of |%s| skipped: %s", uid, exc)
            if slot == "DEF-SORTED":
                assert_relation(kb, uid, KIND_OF, head)
        for rel, value in promotion_candidates(kb, phrasal, threshold):
            if value != uid and not kb.slot(rel).taxonomic:
                assert_relation(kb, uid, rel, value)
    return [p for _, p in phrasals]


# -- the build ------------------------------------------------------------------

class Builder:
    """Knowledge-base side of definition parsing: word resolution and phrasal creation."""

    def __init__(self, kb: KnowledgeBase, hierarchy: PatternHierarchy, index: LexiconIndex,
                 threshold: float = DEFAULT_THRESHOLD):
        self.kb = kb
        self.hierarchy = hierarchy
        self.index = index
        self.threshold = threshold
        # phrasal occurrences are numbered globally, in creation order
        self.occurrences = sum(1 for u in kb.units.values() if u.kind == "phrasal-concept")

    def lemma(self, word: str, pos: str) -> str:
        return self.index.lemma(word.lower(), pos)[0]

    def resolve(self, word: str, pos: str, keep_ambiguous: bool = False) -> str:
        lemma = self.lemma(word, pos)
        senses = self.index.senses(lemma, None if keep_ambiguous else pos)
        if not senses:
            return ensure_reference(ConceptRef(lemma, 1, 1), self.kb, pos)
        if len(senses) == 1:
            return str(senses[0].ref)
        homographs = sorted({s.homograph for s in senses})
        if len(homographs) > 1:
            ref = ConceptRef(lemma, "?", "?")
        else:
            every = [s.sense for s in self.index.senses(lemma) if s.homograph == homographs[0]]
            chosen = tuple(sorted(s.sense for s in senses))
            ref = ConceptRef(lemma, homographs[0], "?" if len(chosen) == len(every) else chosen)
        return ensure_reference(ref, self.kb, pos)

    def new_phrasal(self, head: str, pos: str, text: str) -> str:
        base = parse_concept_ref(head).base()
        while True:
            self.occurrences += 1
            uid = str(ConceptRef(base.headword, base.homograph or 1, base.sense or 1, self.occurrences))
            if uid not in self.kb:
                break
        self.kb.create_unit(uid, "phrasal-concept", [head], [PHRASAL_CLASS[pos]], pos)
        self.kb.add_value(uid, "TEXTE", text, INFO)
        return uid

    def parse(self, record: EntryRecord, report: BuildReport) -> bool:
        uid = str(record.ref)
        if record.pos not in DOMAINS:
            report.unparsed.append(uid)
            return False
        tokens = tag_tokens(tokenize(record.definition), self.hierarchy, self.index)
        match = match_definition(tokens, self.hierarchy, record.pos) if tokens else None
        if match is None or not match.success:
            report.unparsed.append(uid)
            return False
        try:
            apply_sscr(match, uid, self.kb, self.hierarchy, self)
        except (SSCRError, FrameError) as exc:
            report.unparsed.append(uid)
            report.errors.append(f"|{uid}|: {exc}")
            return False
        return True


def build_all(records: Iterable[EntryRecord], hierarchy: PatternHierarchy, kb: KnowledgeBase,
              threshold: float = DEFAULT_THRESHOLD) -> BuildReport:
    """Two passes: every sense first, then parsing, promotion and definiens transfer."""
    records = list(records)
    builder = Builder(kb, hierarchy, LexiconIndex(records), threshold)
    report = BuildReport()
    defined = []
    for record in records:
        try:
            build_concept(record, kb)
            build_entry(record, kb)
        except FrameError as exc:
            report.errors.append(f"{record.headword} {record.ref}: {exc}")
            continue
        if record.definition:
            defined.append(record)
    parsed = [str(r.ref) for r in defined if builder.parse(r, report)]
    for uid in list(kb.units):
        if kb.units[uid].kind in CONCEPT_KINDS:
            promote(uid, threshold, kb)
    for uid in parsed:
        if any(kb.unit(v.value).kind == "phrasal-concept"
               for slot in ("DEF-CLASSIQUE", "DEF-SORTED") for v in kb.local_values(uid, slot)):
            transfer_definiens(uid, kb, threshold)
    counts = count_units(kb)
    counts.unparsed, counts.errors = report.unparsed, report.errors
    return counts


def definition_slots(kb: KnowledgeBase, uid: str) -> list[str]:
    return [s for s in DEF_SLOTS if kb.unit(uid).slots.get(s)]

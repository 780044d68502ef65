"""Second-phase enrichment: synonymy closure, taxonomy growth and sense disambiguation."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass

from . import frames
from .frames import CONCEPT_KINDS, CycleError, KnowledgeBase
from .schema import CANDIDATES, HYPERNYM, SYNONYMS, assert_relation

SCOPED_AMBIGUITY = (frames.SENSE, frames.COMPLEX)


def _synonym_nodes(kb: KnowledgeBase) -> list[str]:
    return [uid for uid, u in kb.units.items() if u.kind in CONCEPT_KINDS]


def _arc_count(kb: KnowledgeBase) -> int:
    return sum(1 for _ in kb.arcs())


def synonym_components(kb: KnowledgeBase) -> list[list[str]]:
    """Connected components of the undirected SYNONYMES graph, sorted."""
    adjacency: dict[str, set[str]] = {}
    for uid in _synonym_nodes(kb):
        for sv in kb.unit(uid).slots.get(SYNONYMS, []):
            adjacency.setdefault(uid, set()).add(sv.value)
            adjacency.setdefault(sv.value, set()).add(uid)
    seen: set[str] = set()
    components = []
    for start in sorted(adjacency):
        if start in seen:
            continue
        stack, part = [start], []
        seen.add(start)
        while stack:
            node = stack.pop()
            part.append(node)
            for nxt in adjacency[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        components.append(sorted(part))
    return components


def close_synonymy(kb: KnowledgeBase) -> int:
    """Make SYNONYMES symmetric and transitive between concepts of the same POS."""
    added = 0
    for part in synonym_components(kb):
        for a in part:
            present = {sv.value for sv in kb.unit(a).slots.get(SYNONYMS, [])}
            for b in part:
                if a == b or b in present or kb.unit(a).pos != kb.unit(b).pos:
                    continue
                had_back = any(sv.value == a for sv in kb.unit(b).slots.get(SYNONYMS, []))
                assert_relation(kb, a, SYNONYMS, b)
                added += 1 if had_back else 2
                present.add(b)
    return added


def extend_taxonomy_by_synonymy(kb: KnowledgeBase) -> int:
    """Give a genus-less concept the genera its synonyms had before the pass."""
    genera = {uid: kb.concept_parents(uid) for uid in _synonym_nodes(kb)}
    added = 0
    for uid in sorted(genera):
        if genera[uid]:
            continue
        borrowed: list[str] = []
        for sv in kb.unit(uid).slots.get(SYNONYMS, []):
            borrowed += [g for g in genera.get(sv.value, []) if g not in borrowed]
        for genus in borrowed:
            if genus == uid:
                continue
            try:
                if assert_relation(kb, uid, HYPERNYM, genus):
                    added += 2
            except CycleError:
                continue
    return added


def concept_ancestors(kb: KnowledgeBase, uid: str) -> set[str]:
    """Hypernym ancestors, leaving out the built-in classes every concept shares."""
    out: set[str] = set()
    stack = kb.concept_parents(uid)
    while stack:
        node = stack.pop()
        if node not in out:
            out.add(node)
            stack.extend(kb.concept_parents(node))
    return out


def _orphaned(kb: KnowledgeBase, uid: str) -> bool:
    unit = kb.unit(uid)
    if kb.children(uid):
        return False
    if any(vals for name, vals in unit.slots.items() if name != CANDIDATES):
        return False
    return not any(sv.value == uid for other in kb.units.values()
                   for vals in other.slots.values() for sv in vals)


def disambiguate(kb: KnowledgeBase) -> tuple[int, int]:
    """Re-target arcs to the only candidate sense sharing an ancestor with the source."""
    resolved = unresolved = 0
    ambiguous = sorted(uid for uid, u in kb.units.items()
                       if any(m in SCOPED_AMBIGUITY for m in u.memberships))
    for amb in ambiguous:
        candidates = [sv.value for sv in kb.unit(amb).slots.get(CANDIDATES, [])]
        incoming = []
        for name, values in kb.unit(amb).slots.items():
            definition = kb.slot_definitions.get(name)
            if definition is None or definition.level != "relational" or not definition.inverse:
                continue
            incoming += [(sv.value, definition.inverse) for sv in values]
        touched = False
        for source, relation in sorted(incoming):
            src_anc = concept_ancestors(kb, source)
            hits = [c for c in candidates if concept_ancestors(kb, c) & src_anc]
            if len(hits) != 1:
                unresolved += 1
                continue
            facets = next(sv.facets for sv in kb.unit(source).slots[relation] if sv.value == amb)
            back = next(sv.facets for sv in kb.unit(amb).slots[kb.slot(relation).inverse]
                        if sv.value == source)
            kb.remove_value(source, relation, amb)
            kb.add_value(source, relation, hits[0], facets, back)
            resolved += 1
            touched = True
        if touched and _orphaned(kb, amb):
            for cand in candidates:
                kb.remove_value(amb, CANDIDATES, cand)
            kb.remove_unit(amb)
    return resolved, unresolved


@dataclass
class KBStats:
    entries: int
    units: int
    phrasal: int
    ambiguous: int
    arcs: int
    arcs_before: int | None = None
    percent_increase: float | None = None

    def render(self) -> str:
        text = (f"entries={self.entries} units={self.units} phrasal={self.phrasal} "
                f"ambiguous={self.ambiguous} arcs={self.arcs}")
        if self.arcs_before is not None:
            text += f" arcs_before={self.arcs_before} increase={self.percent_increase}%"
        return text

    def to_json(self) -> dict:
        data = asdict(self)
        if self.arcs_before is None:
            del data["arcs_before"], data["percent_increase"]
        return data


def stats(kb: KnowledgeBase, before: KnowledgeBase | bytes | None = None) -> KBStats:
    """Unit and arc counts; with ``before`` (a KB or snapshot) also the arc increase."""
    entries = units = phrasal = ambiguous = 0
    for unit in kb.units.values():
        if unit.kind == "entry":
            entries += 1
        if unit.kind in CONCEPT_KINDS:
            units += 1
        if unit.kind == "phrasal-concept":
            phrasal += 1
        if any(m in frames.AMBIGUITY_CLASSES for m in unit.memberships):
            ambiguous += 1
    result = KBStats(entries, units, phrasal, ambiguous, _arc_count(kb))
    if before is not None:
        if isinstance(before, bytes):
            before = frames.import_snapshot(before)
        result.arcs_before = _arc_count(before)
        result.percent_increase = percent_increase(result.arcs_before, result.arcs)
    return result


def percent_increase(before: int, after: int) -> float:
    if before == 0:
        return 0.0
    return round(100.0 * (after - before) / before, 2)


@dataclass
class EnrichmentReport:
    arcs_before: int = 0
    arcs_after: int = 0
    percent_increase: float = 0.0
    synonymy_added: int = 0
    taxonomy_added: int = 0
    resolved: int = 0
    unresolved: int = 0

    def to_json(self) -> dict:
        return asdict(self)

    def render(self, as_json: bool = False) -> str:
        data = self.to_json()
        if as_json:
            return json.dumps(data, sort_keys=True, indent=1)
        width = max(map(len, data))
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in data.items())


def enrich(kb: KnowledgeBase) -> EnrichmentReport:
    """All passes in order; the knowledge base is modified in place."""
    report = EnrichmentReport(arcs_before=_arc_count(kb))
    report.synonymy_added = close_synonymy(kb)
    report.taxonomy_added = extend_taxonomy_by_synonymy(kb)
    report.resolved, report.unresolved = disambiguate(kb)
    report.arcs_after = _arc_count(kb)
    report.percent_increase = percent_increase(report.arcs_before, report.arcs_after)
    return report

"""Frame system shared by the dictionary, thesaurus and structure knowledge bases.

Units carry parent classes (SUBCLASS.OF), memberships (MEMBER.OF) and slots.
Every slot is declared by a :class:`SlotDefinition` that fixes its level, its
inverse and its inheritance role.  Inverse values are maintained eagerly by
:meth:`KnowledgeBase.add_value`, so inverse completeness holds after every
mutation.

The taxonomic slot pair (HYPERONYME/HYPONYME) is not stored as slot values:
it is read from and written to the parent-class links, which is how the
concept taxonomy gets inheritance for free.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator

FORMAT_VERSION = 1

LEVELS = ("definitory", "syntagmatic", "relational", "general-info", "dictionary")
ROLES = ("UNION", "INHIBIT")
VALUE_KINDS = ("unit-ref", "text", "literal")
KINDS = ("kb-class", "concept", "phrasal-concept", "entry", "reference")
CONCEPT_KINDS = frozenset({"concept", "phrasal-concept", "reference"})
ATTRIBUTE_CLASSES = ("INFO-GENERALE", "DEFINITOIRES", "SYNTAGMATIQUES", "RELATIONNELS")

ROOT = "LKB-STRUCTURES"
ENTRIES = "ENTRIES"
DEFINITIONS = "DEFINITIONS"
REFERENCES = "REFERENCES"
CONCEPTS = "CONCEPTS"
TYPE_CONCEPTS = "TYPE-CONCEPTS"
PHRASAL_CONCEPTS = "PHRASAL-CONCEPTS"
AMBIGUOUS_CONCEPTS = "AMBIGUOUS-CONCEPTS"
ENTITIES = "ENTITES"
ACTIONS_EVENTS = "ACTIONS/EVENEMENTS"
QUALITIES = "QUALITES"
STATES = "ETATS"
NOMINALS = "NOMINALES"
VERBALS = "VERBALES"
ADJECTIVALS = "ADJECTIVALES"
ADVERBIALS = "ADVERBIALES"
HOMOGRAPH = "HOMOGRAPHE"
SENSE = "SENSE"
COMPLEX = "COMPLEX"
AMBIGUITY_CLASSES = (HOMOGRAPH, SENSE, COMPLEX)

# (class, parent) in creation order
BUILTIN_CLASSES: tuple[tuple[str, str | None], ...] = (
    (ROOT, None),
    (ENTRIES, ROOT),
    (DEFINITIONS, ROOT),
    ("NOMS", DEFINITIONS),
    ("VERBES", DEFINITIONS),
    ("ADJECTIFS", DEFINITIONS),
    ("ADVERBES", DEFINITIONS),
    (REFERENCES, ROOT),
    (CONCEPTS, ROOT),
    (TYPE_CONCEPTS, CONCEPTS),
    (ENTITIES, TYPE_CONCEPTS),
    (ACTIONS_EVENTS, TYPE_CONCEPTS),
    (QUALITIES, TYPE_CONCEPTS),
    (STATES, TYPE_CONCEPTS),
    (PHRASAL_CONCEPTS, CONCEPTS),
    (NOMINALS, PHRASAL_CONCEPTS),
    (VERBALS, PHRASAL_CONCEPTS),
    (ADJECTIVALS, PHRASAL_CONCEPTS),
    (ADVERBIALS, PHRASAL_CONCEPTS),
    (AMBIGUOUS_CONCEPTS, CONCEPTS),
    (HOMOGRAPH, AMBIGUOUS_CONCEPTS),
    (SENSE, AMBIGUOUS_CONCEPTS),
    (COMPLEX, AMBIGUOUS_CONCEPTS),
)
BUILTIN_CLASS_IDS = frozenset(name for name, _ in BUILTIN_CLASSES)


class FrameError(Exception):
    """Base class for knowledge-base errors."""


class DuplicateError(FrameError):
    pass


class UnknownUnitError(FrameError):
    pass


class UnknownSlotError(FrameError):
    pass


class CycleError(FrameError):
    pass


class ValueKindError(FrameError):
    pass


class FrozenError(FrameError):
    pass


class SnapshotError(FrameError):
    def __init__(self, message: str, position: int | None = None):
        super().__init__(message if position is None else f"{message} (at offset {position})")
        self.position = position


@dataclass
class SlotDefinition:
    name: str
    level: str = "relational"
    inverse: str | None = None
    role: str = "INHIBIT"
    value_kind: str = "unit-ref"
    correspondents: tuple[tuple[str, float | None], ...] = ()
    # "parents" or "children" for the slot pair read from SUBCLASS.OF links
    taxonomic: str = ""

    def __post_init__(self) -> None:
        if self.level not in LEVELS:
            raise FrameError(f"slot {self.name}: unknown level {self.level!r}")
        if self.role not in ROLES:
            raise FrameError(f"slot {self.name}: inheritance role must be UNION or INHIBIT")
        if self.value_kind not in VALUE_KINDS:
            raise FrameError(f"slot {self.name}: unknown value kind {self.value_kind!r}")
        if self.correspondents and self.level not in ("definitory", "syntagmatic"):
            raise FrameError(f"slot {self.name}: correspondents only on definitory/syntagmatic slots")
        if self.taxonomic not in ("", "parents", "children"):
            raise FrameError(f"slot {self.name}: bad taxonomic direction {self.taxonomic!r}")
        self.correspondents = tuple((str(r), None if c is None else float(c))
                                    for r, c in self.correspondents)

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "inverse": self.inverse,
            "role": self.role,
            "value_kind": self.value_kind,
            "correspondents": [[r, c] for r, c in self.correspondents],
            "taxonomic": self.taxonomic,
        }


@dataclass
class SlotValue:
    value: Any
    facets: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"value": self.value, "facets": dict(self.facets)}


@dataclass
class Unit:
    id: str
    kind: str
    parents: list[str] = field(default_factory=list)
    memberships: list[str] = field(default_factory=list)
    slots: dict[str, list[SlotValue]] = field(default_factory=dict)
    pos: str | None = None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "parents": list(self.parents),
            "memberships": list(self.memberships),
            "pos": self.pos,
            "slots": {name: [v.to_json() for v in values]
                      for name, values in self.slots.items() if values},
        }


def _check_facets(facets: dict[str, Any]) -> None:
    for name, val in facets.items():
        if name == "CLASSE-ATTRIBUT" and val not in ATTRIBUTE_CLASSES:
            raise FrameError(f"CLASSE-ATTRIBUT must be one of {ATTRIBUTE_CLASSES}, got {val!r}")
        if isinstance(val, (int, float)) and not isinstance(val, bool):
            if not 0.0 <= val <= 1.0:
                raise FrameError(f"certainty facet {name}={val} outside [0, 1]")


class KnowledgeBase:
    """Units plus slot definitions, with the built-in class taxonomy preloaded."""

    def __init__(self, slot_definitions: Iterable[SlotDefinition] = ()):
        self.units: dict[str, Unit] = {}
        self.slot_definitions: dict[str, SlotDefinition] = {}
        self.frozen = False
        self._children: dict[str, list[str]] = {}
        for name, parent in BUILTIN_CLASSES:
            self.create_unit(name, "kb-class", [parent] if parent else [])
        for definition in slot_definitions:
            self.define_slot(definition)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KnowledgeBase):
            return NotImplemented
        return self.units == other.units and self.slot_definitions == other.slot_definitions

    # -- mutation guard -------------------------------------------------

    def freeze(self) -> None:
        self.frozen = True

    def thaw(self) -> None:
        self.frozen = False

    def _writable(self) -> None:
        if self.frozen:
            raise FrozenError("knowledge base is frozen")

    # -- slot definitions -----------------------------------------------

    def define_slot(self, definition: SlotDefinition) -> None:
        self._writable()
        name, inverse = definition.name, definition.inverse
        if name in self.slot_definitions:
            raise DuplicateError(f"slot {name} already defined")
        if inverse is not None and inverse != name and inverse in self.slot_definitions:
            other = self.slot_definitions[inverse]
            if other.inverse not in (None, name):
                raise FrameError(f"inverse conflict: {inverse} is already the inverse of {other.inverse}")
        self.slot_definitions[name] = definition
        if inverse is None or inverse == name:
            return
        if inverse in self.slot_definitions:
            self.slot_definitions[inverse].inverse = name
        else:
            mirror = {"parents": "children", "children": "parents", "": ""}[definition.taxonomic]
            self.slot_definitions[inverse] = SlotDefinition(
                inverse, level=definition.level, inverse=name, role="INHIBIT",
                value_kind="unit-ref", taxonomic=mirror)

    def slot(self, name: str) -> SlotDefinition:
        try:
            return self.slot_definitions[name]
        except KeyError:
            raise UnknownSlotError(f"unknown slot {name}") from None

    # -- units ------------------------------------------------------------

    def unit(self, unit_id: str) -> Unit:
        try:
            return self.units[unit_id]
        except KeyError:
            raise UnknownUnitError(f"unknown unit |{unit_id}|") from None

    def __contains__(self, unit_id: object) -> bool:
        return unit_id in self.units

    def create_unit(self, unit_id: str, kind: str, parents: Iterable[str] = (),
                    memberships: Iterable[str] = (), pos: str | None = None) -> Unit:
        self._writable()
        if kind not in KINDS:
            raise FrameError(f"unknown unit kind {kind!r}")
        if unit_id in self.units:
            raise DuplicateError(f"unit |{unit_id}| already exists")
        parents, memberships = list(dict.fromkeys(parents)), list(dict.fromkeys(memberships))
        if unit_id in parents:
            raise CycleError(f"|{unit_id}| cannot be its own parent")
        for ref in parents + memberships:
            self.unit(ref)
        unit = Unit(unit_id, kind, parents, memberships, {}, pos)
        self.units[unit_id] = unit
        self._children[unit_id] = []
        for parent in parents:
            self._children[parent].append(unit_id)
        return unit

    def remove_unit(self, unit_id: str) -> None:
        """Delete a unit that no other unit refers to."""
        self._writable()
        unit = self.unit(unit_id)
        if self._children[unit_id]:
            raise FrameError(f"|{unit_id}| still has subclasses")
        for other in self.units.values():
            if unit_id in other.memberships:
                raise FrameError(f"|{unit_id}| still has members")
            for values in other.slots.values():
                if any(v.value == unit_id for v in values):
                    raise FrameError(f"|{unit_id}| is still referenced by |{other.id}|")
        for parent in unit.parents:
            self._children[parent].remove(unit_id)
        del self._children[unit_id]
        del self.units[unit_id]

    def add_membership(self, unit_id: str, class_id: str) -> None:
        self._writable()
        unit = self.unit(unit_id)
        self.unit(class_id)
        if class_id not in unit.memberships:
            unit.memberships.append(class_id)

    def remove_membership(self, unit_id: str, class_id: str) -> None:
        self._writable()
        unit = self.unit(unit_id)
        if class_id in unit.memberships:
            unit.memberships.remove(class_id)

    def add_parent(self, unit_id: str, parent_id: str, first: bool = False) -> bool:
        self._writable()
        unit = self.unit(unit_id)
        self.unit(parent_id)
        if parent_id in unit.parents:
            return False
        if parent_id == unit_id or unit_id in self.ancestors(parent_id):
            raise CycleError(f"SUBCLASS.OF |{unit_id}| -> |{parent_id}| would create a cycle")
        if first:
            unit.parents.insert(0, parent_id)
        else:
            unit.parents.append(parent_id)
        self._children[parent_id].append(unit_id)
        return True

    def remove_parent(self, unit_id: str, parent_id: str) -> bool:
        self._writable()
        unit = self.unit(unit_id)
        if parent_id not in unit.parents:
            return False
        unit.parents.remove(parent_id)
        self._children[parent_id].remove(unit_id)
        return True

    def children(self, unit_id: str) -> list[str]:
        self.unit(unit_id)
        return list(self._children[unit_id])

    def ancestors(self, unit_id: str) -> list[str]:
        """Transitive SUBCLASS.OF closure, depth-first in parent order."""
        seen: dict[str, None] = {}

        def visit(uid: str) -> None:
            for parent in self.units[uid].parents:
                if parent not in seen:
                    seen[parent] = None
                    visit(parent)

        self.unit(unit_id)
        visit(unit_id)
        return list(seen)

    def is_a(self, unit_id: str, class_id: str) -> bool:
        """True when the unit is, or is a member/subclass of, the class."""
        lineage = [unit_id] + self.ancestors(unit_id)
        if class_id in lineage:
            return True
        for uid in lineage:
            for member_of in self.units[uid].memberships:
                if member_of == class_id or class_id in self.ancestors(member_of):
                    return True
        return False

    def concept_parents(self, unit_id: str) -> list[str]:
        return [p for p in self.unit(unit_id).parents if self.units[p].kind in CONCEPT_KINDS]

    # -- slot values --------------------------------------------------------

    def _check_value(self, definition: SlotDefinition, value: Any) -> None:
        if definition.value_kind == "unit-ref":
            if not isinstance(value, str):
                raise ValueKindError(f"{definition.name} takes unit references, got {value!r}")
            self.unit(value)
        elif definition.value_kind == "text":
            if not isinstance(value, str):
                raise ValueKindError(f"{definition.name} takes text, got {value!r}")
        elif not isinstance(value, (str, int, float)) or isinstance(value, bool):
            raise ValueKindError(f"{definition.name} takes literals, got {value!r}")

    def _append(self, unit_id: str, slot: str, value: Any, facets: dict[str, Any]) -> bool:
        values = self.units[unit_id].slots.setdefault(slot, [])
        if any(v.value == value for v in values):
            return False
        values.append(SlotValue(value, dict(facets)))
        return True

    def add_value(self, unit_id: str, slot: str, value: Any,
                  facets: dict[str, Any] | None = None,
                  inverse_facets: dict[str, Any] | None = None) -> bool:
        """Assert a slot value and, for unit references, its inverse.

        Returns True when the value was not already present.
        """
        self._writable()
        self.unit(unit_id)
        definition = self.slot(slot)
        self._check_value(definition, value)
        facets = dict(facets or {})
        inverse_facets = dict(inverse_facets or {})
        _check_facets(facets)
        _check_facets(inverse_facets)
        if definition.taxonomic == "parents":
            return self.add_parent(unit_id, value)
        if definition.taxonomic == "children":
            return self.add_parent(value, unit_id)
        added = self._append(unit_id, slot, value, facets)
        if definition.value_kind == "unit-ref" and definition.inverse:
            self._append(value, definition.inverse, unit_id, inverse_facets)
        return added

    def remove_value(self, unit_id: str, slot: str, value: Any) -> bool:
        self._writable()
        unit = self.unit(unit_id)
        definition = self.slot(slot)
        if definition.taxonomic == "parents":
            return self.remove_parent(unit_id, value)
        if definition.taxonomic == "children":
            return self.remove_parent(value, unit_id)
        values = unit.slots.get(slot, [])
        kept = [v for v in values if v.value != value]
        if len(kept) == len(values):
            return False
        unit.slots[slot] = kept
        if not kept:
            del unit.slots[slot]
        if definition.value_kind == "unit-ref" and definition.inverse and value in self.units:
            target = self.units[value]
            back = [v for v in target.slots.get(definition.inverse, []) if v.value != unit_id]
            if back:
                target.slots[definition.inverse] = back
            else:
                target.slots.pop(definition.inverse, None)
        return True

    def local_values(self, unit_id: str, slot: str) -> list[SlotValue]:
        unit = self.unit(unit_id)
        definition = self.slot_definitions.get(slot)
        if definition is not None and definition.taxonomic == "parents":
            return [SlotValue(p) for p in self.concept_parents(unit_id)]
        if definition is not None and definition.taxonomic == "children":
            if unit.kind not in CONCEPT_KINDS:
                return []
            return [SlotValue(c) for c in self._children[unit_id]
                    if self.units[c].kind in CONCEPT_KINDS]
        return list(unit.slots.get(slot, []))

    def inherited_values(self, unit_id: str, slot: str) -> list[SlotValue]:
        """Values seen through the slot's inheritance role.

        UNION collects local values and those of every ancestor, depth-first
        in parent order; INHIBIT returns local values only.
        """
        self.unit(unit_id)
        if self.slot(slot).role == "INHIBIT":
            return self.local_values(unit_id, slot)
        result: dict[Any, SlotValue] = {}
        visited: set[str] = set()

        def visit(uid: str) -> None:
            visited.add(uid)
            for v in self.local_values(uid, slot):
                result.setdefault(v.value, v)
            for parent in self.units[uid].parents:
                if parent not in visited:
                    visit(parent)

        visit(unit_id)
        return list(result.values())

    def slot_names(self, unit_id: str) -> list[str]:
        """Slots holding a value on the unit, taxonomic ones included."""
        names = [n for n, vals in self.unit(unit_id).slots.items() if vals]
        for name, definition in self.slot_definitions.items():
            if definition.taxonomic and self.local_values(unit_id, name):
                names.append(name)
        return names

    def arcs(self) -> Iterator[tuple[str, str, str]]:
        """Directed relational arcs (source, relation, target), sorted."""
        relational = sorted(n for n, d in self.slot_definitions.items()
                            if d.level == "relational" and d.value_kind == "unit-ref")
        for uid in sorted(self.units):
            for name in relational:
                for target in sorted(v.value for v in self.local_values(uid, name)):
                    yield uid, name, target

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "slot_definitions": {n: d.to_json() for n, d in self.slot_definitions.items()},
            "units": {uid: u.to_json() for uid, u in self.units.items()},
        }


def export_snapshot(kb: KnowledgeBase) -> bytes:
    text = json.dumps(kb.to_json(), sort_keys=True, ensure_ascii=False, indent=1)
    return (text + "\n").encode("utf-8")


def import_snapshot(data: bytes, frozen: bool = False) -> KnowledgeBase:
    """Rebuild a knowledge base from :func:`export_snapshot` output."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise SnapshotError(f"snapshot is not UTF-8: {exc.reason}", exc.start) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SnapshotError(f"malformed snapshot, line {exc.lineno} column {exc.colno}: {exc.msg}",
                            exc.pos) from None
    if not isinstance(doc, dict) or set(doc) != {"format_version", "slot_definitions", "units"}:
        raise SnapshotError("snapshot must hold exactly format_version, slot_definitions, units")
    if doc["format_version"] != FORMAT_VERSION:
        raise SnapshotError(f"unsupported snapshot format_version {doc['format_version']!r}")
    kb = KnowledgeBase.__new__(KnowledgeBase)
    kb.units, kb.slot_definitions, kb.frozen, kb._children = {}, {}, False, {}
    try:
        for name, d in doc["slot_definitions"].items():
            kb.slot_definitions[name] = SlotDefinition(
                name, d["level"], d["inverse"], d["role"], d["value_kind"],
                tuple((r, c) for r, c in d["correspondents"]), d["taxonomic"])
        for uid, u in doc["units"].items():
            kb.units[uid] = Unit(
                uid, u["kind"], list(u["parents"]), list(u["memberships"]),
                {name: [SlotValue(v["value"], dict(v["facets"])) for v in values]
                 for name, values in u["slots"].items()},
                u["pos"])
    except (KeyError, TypeError, ValueError, AttributeError, FrameError) as exc:
        raise SnapshotError(f"malformed snapshot content: {exc!r}") from None
    for uid in kb.units:
        kb._children[uid] = []
    for uid, unit in kb.units.items():
        for ref in unit.parents + unit.memberships:
            if ref not in kb.units:
                raise SnapshotError(f"|{uid}| refers to unknown class |{ref}|")
        for parent in unit.parents:
            kb._children[parent].append(uid)
    for name in BUILTIN_CLASS_IDS:
        if name not in kb.units:
            raise SnapshotError(f"built-in class {name} missing")
    kb.frozen = frozen
    return kb


def violations(kb: KnowledgeBase) -> list[str]:
    """Structural invariant check; an empty list means the KB is sound."""
    problems = []
    for name in BUILTIN_CLASS_IDS:
        if name not in kb.units:
            problems.append(f"missing built-in class {name}")
    for uid, unit in kb.units.items():
        if unit.kind != "kb-class" and not any(m in BUILTIN_CLASS_IDS for m in unit.memberships):
            problems.append(f"|{uid}| belongs to no built-in class")
        if uid in kb.ancestors(uid):
            problems.append(f"SUBCLASS.OF cycle through |{uid}|")
        if unit.kind == "phrasal-concept" and len(kb.concept_parents(uid)) != 1:
            problems.append(f"phrasal |{uid}| does not have exactly one concept head")
        for slot, values in unit.slots.items():
            definition = kb.slot_definitions.get(slot)
            if definition is None:
                problems.append(f"|{uid}| uses undefined slot {slot}")
                continue
            seen = [v.value for v in values]
            if len(seen) != len(set(map(repr, seen))):
                problems.append(f"|{uid}| {slot} holds duplicate values")
            if definition.value_kind != "unit-ref":
                continue
            for v in values:
                if v.value not in kb.units:
                    problems.append(f"|{uid}| {slot} dangles to |{v.value}|")
                elif definition.inverse and not any(
                        w.value == uid for w in kb.units[v.value].slots.get(definition.inverse, [])):
                    problems.append(f"|{uid}| {slot} |{v.value}| lacks inverse {definition.inverse}")
    return problems

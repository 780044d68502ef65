from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from lexframe import frames
from lexframe.frames import (CycleError, DuplicateError, FrameError, FrozenError, KnowledgeBase,
                             SlotDefinition, SnapshotError, UnknownSlotError, UnknownUnitError,
                             ValueKindError, export_snapshot, import_snapshot, violations)
from lexframe.schema import HYPERNYM, HYPONYM, SYNONYMS, assert_relation, new_dkb


@pytest.fixture
def kb():
    kb = new_dkb()
    kb.create_unit("plante", "concept", ["ENTITES"], ["NOMS"], "NOM")
    kb.create_unit("fleur", "concept", ["plante"], ["NOMS"], "NOM")
    kb.create_unit("rose", "concept", ["fleur"], ["NOMS"], "NOM")
    return kb


def test_builtin_taxonomy_present():
    kb = KnowledgeBase()
    assert frames.BUILTIN_CLASS_IDS <= set(kb.units)
    assert kb.is_a("NOMINALES", "PHRASAL-CONCEPTS")
    assert not oracles.has_cycle(kb)


def test_inverse_is_maintained_both_ways(kb):
    assert_relation(kb, "rose", "OBJECTIF", "plante")
    assert [v.value for v in kb.local_values("plante", "OBJECTIF+INV")] == ["rose"]
    assert kb.unit("plante").slots["OBJECTIF+INV"][0].facets["INVERSES-CORRESPONDANTS"] == "OBJECTIF"
    kb.remove_value("rose", "OBJECTIF", "plante")
    assert "OBJECTIF+INV" not in kb.unit("plante").slots


def test_duplicate_value_is_not_added_twice(kb):
    assert kb.add_value("rose", SYNONYMS, "fleur")
    assert not kb.add_value("rose", SYNONYMS, "fleur")
    assert len(kb.local_values("rose", SYNONYMS)) == 1


def test_hypernym_slots_read_the_parent_links(kb):
    assert [v.value for v in kb.local_values("rose", HYPERNYM)] == ["fleur"]
    assert [v.value for v in kb.local_values("plante", HYPONYM)] == ["fleur"]
    # built-in classes are not concepts, so they never show as hypernyms
    assert kb.local_values("plante", HYPERNYM) == []
    assert kb.local_values("ENTITES", HYPONYM) == []


def test_adding_a_hypernym_adds_a_parent(kb):
    kb.create_unit("arbre", "concept", ["ENTITES"], ["NOMS"], "NOM")
    kb.add_value("rose", HYPERNYM, "arbre")
    assert kb.unit("rose").parents == ["fleur", "arbre"]
    kb.add_value("arbre", HYPONYM, "fleur")
    assert "arbre" in kb.unit("fleur").parents


def test_cycles_are_refused(kb):
    with pytest.raises(CycleError):
        kb.add_parent("plante", "rose")
    with pytest.raises(CycleError):
        kb.add_value("plante", HYPERNYM, "plante")
    assert not oracles.has_cycle(kb)


def test_union_and_inhibit_inheritance(kb):
    assert_relation(kb, "plante", "PARTIE-DE", "fleur")
    assert_relation(kb, "plante", SYNONYMS, "fleur")
    assert [v.value for v in kb.inherited_values("rose", "PARTIE-DE")] == ["fleur"]
    assert kb.inherited_values("rose", SYNONYMS) == []
    assert oracles.union_mismatches(kb) == []


def test_unknown_references_raise(kb):
    with pytest.raises(UnknownUnitError):
        kb.add_value("rose", SYNONYMS, "nowhere")
    with pytest.raises(UnknownSlotError):
        kb.add_value("rose", "NO-SUCH-SLOT", "fleur")
    with pytest.raises(UnknownUnitError):
        kb.create_unit("x", "concept", ["nowhere"])


def test_value_kinds_are_checked(kb):
    with pytest.raises(ValueKindError):
        kb.add_value("rose", "TEXTE-DEFINITION", 3)
    with pytest.raises(ValueKindError):
        kb.add_value("rose", "GROUPE-CATEGORIEL", True)


def test_facet_checks(kb):
    with pytest.raises(FrameError):
        kb.add_value("rose", SYNONYMS, "fleur", {"CLASSE-ATTRIBUT": "NOPE"})
    with pytest.raises(FrameError):
        kb.add_value("rose", SYNONYMS, "fleur", {"MATIERE": 1.5})


def test_duplicates_refused(kb):
    with pytest.raises(DuplicateError):
        kb.create_unit("rose", "concept")
    with pytest.raises(DuplicateError):
        kb.define_slot(SlotDefinition(SYNONYMS))


def test_slot_definition_validation():
    with pytest.raises(FrameError):
        SlotDefinition("X", level="nowhere")
    with pytest.raises(FrameError):
        SlotDefinition("X", role="OVERRIDE")
    with pytest.raises(FrameError):
        SlotDefinition("X", level="relational", correspondents=(("Y", None),))


def test_inverse_slot_is_defined_on_demand():
    kb = KnowledgeBase([SlotDefinition("CONTIENT", inverse="DANS")])
    assert kb.slot("DANS").inverse == "CONTIENT"
    with pytest.raises(FrameError):
        kb.define_slot(SlotDefinition("AUTRE", inverse="DANS"))


def test_remove_unit_only_when_unreferenced(kb):
    with pytest.raises(FrameError):
        kb.remove_unit("fleur")
    kb.remove_unit("rose")
    assert "rose" not in kb
    assert kb.children("fleur") == []


def test_frozen_kb_rejects_writes(kb):
    kb.freeze()
    with pytest.raises(FrozenError):
        kb.add_value("rose", SYNONYMS, "fleur")
    with pytest.raises(FrozenError):
        kb.create_unit("x", "concept")
    kb.thaw()
    kb.add_value("rose", SYNONYMS, "fleur")


def test_arcs_match_independent_walk(golden_kb, enriched_kb):
    for kb in (golden_kb, enriched_kb):
        arcs = list(kb.arcs())
        assert arcs == sorted(arcs)
        assert len(arcs) == oracles.arc_count(kb)


def test_violations_on_built_kb(golden_kb):
    assert violations(golden_kb) == []
    golden_kb.unit("plante I 1").slots["OBJECTIF"] = [frames.SlotValue("métal I 1")]
    assert any("lacks inverse" in p for p in violations(golden_kb))


def test_snapshot_is_canonical(golden_kb):
    data = export_snapshot(golden_kb)
    again = import_snapshot(data)
    assert export_snapshot(again) == data
    assert again == golden_kb
    assert import_snapshot(data, frozen=True).frozen


@pytest.mark.parametrize("data, fragment", [
    (b"\xff", "UTF-8"),
    (b"{", "malformed"),
    (b"[]", "exactly"),
    (b'{"format_version": 9, "slot_definitions": {}, "units": {}}', "format_version"),
    (b'{"format_version": 1, "slot_definitions": {}, "units": {}}', "built-in"),
])
def test_bad_snapshots(data, fragment):
    with pytest.raises(SnapshotError, match=fragment):
        import_snapshot(data)


names = st.sampled_from([f"u{i}" for i in range(8)])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(names, st.sampled_from(["PARTIE-DE", SYNONYMS, HYPERNYM, "USAGE"]),
                          names, st.text(max_size=6)), max_size=25))
def test_snapshot_round_trip_property(ops):
    kb = new_dkb()
    for i in range(8):
        kb.create_unit(f"u{i}", "concept", ["ENTITES"], ["NOMS"], "NOM")
    for src, slot, tgt, text in ops:
        try:
            kb.add_value(src, slot, text if slot == "USAGE" else tgt)
        except CycleError:
            pass
    data = export_snapshot(kb)
    assert export_snapshot(import_snapshot(data)) == data
    assert oracles.inverse_gaps(kb) == []
    assert not oracles.has_cycle(kb)
    assert violations(kb) == []

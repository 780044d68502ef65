from __future__ import annotations

import json

import pytest

import oracles
from lexframe import export_snapshot
from lexframe.enrich import (EnrichmentReport, close_synonymy, disambiguate, enrich,
                             extend_taxonomy_by_synonymy, percent_increase, stats)
from lexframe.schema import CANDIDATES, SYNONYMS, assert_relation, new_dkb


def _kb(*specs):
    """Units given as (id, pos, parents)."""
    kb = new_dkb()
    for uid, pos, parents in specs:
        kb.create_unit(uid, "concept", parents or ["ENTITES"], ["NOMS"], pos)
    return kb


def _syn(kb, uid):
    return {v.value for v in kb.local_values(uid, SYNONYMS)}


def test_symmetry():
    kb = _kb(("a", "NOM", None), ("b", "NOM", None))
    kb.add_value("a", SYNONYMS, "b")
    kb.unit("b").slots.pop(SYNONYMS)  # one-way, as an older snapshot might hold it
    assert close_synonymy(kb) == 1
    assert _syn(kb, "b") == {"a"}


def test_transitivity():
    kb = _kb(("a", "NOM", None), ("b", "NOM", None), ("c", "NOM", None))
    assert_relation(kb, "a", SYNONYMS, "b")
    assert_relation(kb, "b", SYNONYMS, "c")
    assert close_synonymy(kb) == 2
    assert _syn(kb, "a") == {"b", "c"} and _syn(kb, "c") == {"a", "b"}
    assert close_synonymy(kb) == 0


def test_closure_stays_within_pos():
    kb = _kb(("a", "NOM", None), ("b", "NOM", None), ("v", "VERBE", None))
    assert_relation(kb, "a", SYNONYMS, "v")
    assert_relation(kb, "v", SYNONYMS, "b")
    close_synonymy(kb)
    assert _syn(kb, "a") == {"v", "b"}
    assert _syn(kb, "v") == {"a", "b"}


def test_cycle_terminates_without_self_loops():
    kb = _kb(*[(u, "NOM", None) for u in "abc"])
    for x, y in ("ab", "bc", "ca"):
        assert_relation(kb, x, SYNONYMS, y)
    close_synonymy(kb)
    assert all(u not in _syn(kb, u) for u in "abc")


def _expected_genera(kb):
    """Genus-less concepts inherit their synonyms' genera, read before the pass."""
    before = {u: set(kb.concept_parents(u)) for u in kb.units if kb.unit(u).kind == "concept"}
    return {u: set().union(*(before[s] for s in _syn(kb, u))) - {u} if not g and _syn(kb, u) else g
            for u, g in before.items()}


@pytest.mark.parametrize("syns, expected", [
    ([("a", "b")], {"a": {"g"}, "b": {"g"}}),
    ([("a", "h")], {"a": {"g"}, "h": {"g2"}}),
    ([("a", "b"), ("b", "c")], {"a": {"g"}, "b": {"g"}, "c": {"g"}}),
])
def test_taxonomy_from_synonymy(syns, expected):
    kb = _kb(("g", "NOM", None), ("g2", "NOM", None), ("a", "NOM", ["g"]), ("h", "NOM", ["g2"]),
             ("b", "NOM", None), ("c", "NOM", None))
    for x, y in syns:
        assert_relation(kb, x, SYNONYMS, y)
    close_synonymy(kb)
    oracle = _expected_genera(kb)
    pairs_before = sum(len(kb.concept_parents(u)) for u in oracle)
    added = extend_taxonomy_by_synonymy(kb)
    got = {u: set(kb.concept_parents(u)) for u in oracle}
    assert got == oracle
    assert {u: got[u] for u in expected} == expected
    # each new genus link is one HYPERONYME arc plus its HYPONYME mirror
    assert added == 2 * (sum(map(len, got.values())) - pairs_before)
    assert extend_taxonomy_by_synonymy(kb) == 0


def _panser(shared: bool = False):
    """Two senses of panser under different genera, referred to from |soin I 1|."""
    kb = _kb(("soigner I 1", "VERBE", ["ACTIONS/EVENEMENTS"]),
             ("recouvrir I 1", "VERBE", ["ACTIONS/EVENEMENTS"]),
             ("panser I 1", "VERBE", ["soigner I 1"]),
             ("panser I 2", "VERBE", ["soigner I 1" if shared else "recouvrir I 1"]),
             ("infirmier I 1", "NOM", None),
             ("soin I 1", "NOM", ["soigner I 1"]))
    kb.create_unit("panser I ?", "concept", ["ACTIONS/EVENEMENTS"], ["SENSE"], "VERBE")
    for cand in ("panser I 1", "panser I 2"):
        kb.add_value("panser I ?", CANDIDATES, cand)
    assert_relation(kb, "soin I 1", "OBJECTIF", "panser I ?")
    return kb


def _exhaustive_choice(kb, source, ambiguous):
    concept_anc = lambda u: {a for a in oracles.ancestors(kb, u) if kb.unit(a).kind == "concept"}
    cands = [v.value for v in kb.local_values(ambiguous, CANDIDATES)]
    hits = [c for c in cands if concept_anc(c) & concept_anc(source)]
    return hits[0] if len(hits) == 1 else None


def test_disambiguation_resolves_and_drops_orphan():
    kb = _panser()
    expected = _exhaustive_choice(kb, "soin I 1", "panser I ?")
    assert expected == "panser I 1"
    assert disambiguate(kb) == (1, 0)
    assert [v.value for v in kb.local_values("soin I 1", "OBJECTIF")] == [expected]
    assert "panser I ?" not in kb
    assert oracles.inverse_gaps(kb) == []
    assert disambiguate(kb) == (0, 0)


def test_disambiguation_tie_stays_ambiguous():
    kb = _panser(shared=True)
    assert _exhaustive_choice(kb, "soin I 1", "panser I ?") is None
    before = export_snapshot(kb)
    assert disambiguate(kb) == (0, 1)
    assert export_snapshot(kb) == before


def test_homograph_ambiguity_untouched():
    kb = _panser()
    kb.remove_membership("panser I ?", "SENSE")
    kb.add_membership("panser I ?", "HOMOGRAPHE")
    assert disambiguate(kb) == (0, 0)


def test_retargeting_keeps_arc_count():
    kb = _panser()
    arcs = oracles.arc_count(kb)
    disambiguate(kb)
    assert oracles.arc_count(kb) == arcs


def test_stats_empty_and_format():
    empty = stats(new_dkb())
    assert empty.render() == "entries=0 units=0 phrasal=0 ambiguous=0 arcs=0"


def test_stats_against_arc_walk(built_snapshot, enriched_kb):
    s = stats(enriched_kb, built_snapshot)
    assert s.arcs == oracles.arc_count(enriched_kb)
    assert s.entries == 12 and s.phrasal == 7
    assert s.render().endswith(f"arcs_before={s.arcs_before} increase={s.percent_increase}%")
    assert set(s.to_json()) >= {"arcs_before", "percent_increase"}


def test_percent_increase():
    assert percent_increase(19691, 21800) == 10.71
    assert percent_increase(0, 5) == 0.0


def test_enrich_report(golden_kb):
    report = enrich(golden_kb)
    assert report.arcs_after > report.arcs_before
    assert report.synonymy_added == report.arcs_after - report.arcs_before - report.taxonomy_added
    data = json.loads(report.render(as_json=True))
    assert data["arcs_after"] == report.arcs_after
    assert report.render().splitlines()[0].split() == ["arcs_before", str(report.arcs_before)]
    assert isinstance(EnrichmentReport().to_json(), dict)

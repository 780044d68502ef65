"""Ask for relations that are only implied.

Géranium is defined as a plant for ornament, and ornament as "that which
adorns".  The triple (OBJECTIF CE-QUI OBJECTIF) lets a query conclude that
the purpose of a geranium is to adorn.  The conclusion exists only for the
duration of the query; the knowledge base is not modified.
"""
from lexframe import data_text, export_snapshot, parse_lexicon
from lexframe.build import build_all
from lexframe.inference import default_registry, query_relation, replay
from lexframe.patterns import compile_hierarchy
from lexframe.schema import assert_relation, new_dkb

kb = new_dkb()
build_all(parse_lexicon(data_text("golden_lexicon.txt")), compile_hierarchy(data_text("patterns.txt")), kb)
registry = default_registry(kb)
snapshot = export_snapshot(kb)

for deduce in (False, True):
    print(f"géranium OBJECTIF, deduce={deduce}")
    for fact in query_relation("géranium I 1", "OBJECTIF", kb, registry, deduce=deduce):
        print("\n".join(fact.trace_lines(1)))
        assert replay(fact, kb, registry)
print("snapshot unchanged:", export_snapshot(kb) == snapshot)

# A part of a member is not a member: no triple composes PARTIE-DE with MEMBRE-DE.
small = new_dkb()
for uid in ("roue", "vélo", "flotte"):
    small.create_unit(uid, "concept", [], ["CONCEPTS"], "NOM")
assert_relation(small, "roue", "PARTIE-DE", "vélo")
assert_relation(small, "vélo", "MEMBRE-DE", "flotte")
found = query_relation("roue", "PARTIE-DE", small, default_registry(small), deduce=True)
print("roue PARTIE-DE:", [f.value for f in found])

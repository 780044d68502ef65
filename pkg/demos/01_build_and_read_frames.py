"""Build the sample dictionary and read a few frames.

Twelve lexicon lines go in; every sense becomes a concept unit, every
phrase met inside a definition becomes a phrasal concept, and the
definitory slots found by the parser are promoted to relations.
"""
from lexframe import data_text, parse_lexicon
from lexframe.build import build_all
from lexframe.patterns import compile_hierarchy
from lexframe.render import render_frame
from lexframe.schema import new_dkb

records = parse_lexicon(data_text("golden_lexicon.txt"))
hierarchy = compile_hierarchy(data_text("patterns.txt"))
kb = new_dkb()
report = build_all(records, hierarchy, kb)
print(report.render())
print()

# "une plante d'ornement": the genus plante becomes the hypernym and the
# "de" complement, read through the FINALITES word class, becomes OBJECTIF.
print(render_frame(kb, "géranium I 1"))
print(render_frame(kb, "plante I 1#3"))
print(render_frame(kb, "géranium I 1", view="relational"))

# "qui ajuste des pièces de métal" nests two phrasal concepts.
print(render_frame(kb, "ajusteur I 1"))
print(render_frame(kb, "pièce I 1#2"))

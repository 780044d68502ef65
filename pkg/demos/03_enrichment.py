"""Second phase: close synonymy, grow the taxonomy, settle ambiguous senses.

The sample corpus defines plat as "uni, égal", so plat gets two synonyms;
closing the relation links uni and égal to each other as well.  A small
extra lexicon then shows a sense ambiguity being settled by the taxonomy.
"""
from lexframe import data_text, export_snapshot, parse_lexicon
from lexframe.build import build_all
from lexframe.enrich import enrich, stats
from lexframe.patterns import compile_hierarchy
from lexframe.schema import new_dkb

hierarchy = compile_hierarchy(data_text("patterns.txt"))

kb = new_dkb()
build_all(parse_lexicon(data_text("golden_lexicon.txt")), hierarchy, kb)
before = export_snapshot(kb)
print(enrich(kb).render())
print(stats(kb, before).render())
print()

# métal has two senses here, under different genera.  The phrasal
# "pièce de métal" points at the ambiguous |métal I ?| until enrichment
# notices that only the first sense shares an ancestor (objet) with it.
lexicon = """\
objet|I|1|NOM|une chose|
pièce|I|1|NOM|un objet|
métal|I|1|NOM|un objet brillant|
métal|I|2|NOM|une musique|
médaille|I|1|NOM|une pièce de métal|
"""
kb = new_dkb()
build_all(parse_lexicon(lexicon), hierarchy, kb)
phrasal = next(uid for uid, unit in kb.units.items()
               if unit.kind == "phrasal-concept" and unit.slots["TEXTE"][0].value == "pièce de métal")
print(f"|{phrasal}| MATIERE before:", [v.value for v in kb.local_values(phrasal, "MATIERE")])
report = enrich(kb)
print(f"|{phrasal}| MATIERE after: ", [v.value for v in kb.local_values(phrasal, "MATIERE")])
print(f"resolved={report.resolved} unresolved={report.unresolved}")

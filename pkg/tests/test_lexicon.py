from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lexframe.lexicon import (ConceptRef, ConceptRefError, LexiconError, LexiconIndex, from_roman,
                              lemma_candidates, parse_concept_ref, parse_lexicon,
                              render_concept_ref, to_roman)


@pytest.mark.parametrize("text, ref", [
    ("géranium I 1", ConceptRef("géranium", 1, 1)),
    ("|plante I 1#3|", ConceptRef("plante", 1, 1, 3)),
    ("panser I ?", ConceptRef("panser", 1, "?")),
    ("vol ? ?", ConceptRef("vol", "?", "?")),
    ("lame II 2/3", ConceptRef("lame", 2, (2, 3))),
    ("ENTITES", ConceptRef("ENTITES")),
])
def test_parse_concept_ref(text, ref):
    assert parse_concept_ref(text) == ref


@pytest.mark.parametrize("text", ["", "a b c d", "plante#3", "x IIII 1", "x I 01", "x I 3/3",
                                  "x I 0", "x I 1#0"])
def test_malformed_concept_refs(text):
    with pytest.raises(ConceptRefError):
        parse_concept_ref(text)


def test_ambiguity_kinds():
    assert ConceptRef("a", "?", "?").ambiguity == "HOMOGRAPHE"
    assert ConceptRef("a", 1, "?").ambiguity == "SENSE"
    assert ConceptRef("a", 1, (1, 2)).ambiguity == "COMPLEX"
    assert ConceptRef("a", 1, 1).ambiguity is None
    assert ConceptRef("a", 1, 1, 4).base() == ConceptRef("a", 1, 1)


def test_roman_numerals():
    assert [to_roman(n) for n in (1, 4, 9, 14, 40, 1994)] == ["I", "IV", "IX", "XIV", "XL", "MCMXCIV"]
    with pytest.raises(ValueError):
        from_roman("IIII")


refs = st.builds(
    ConceptRef,
    st.text(st.characters(whitelist_categories=("Ll", "Lu")), min_size=1, max_size=8),
    st.one_of(st.just("?"), st.integers(1, 40)),
    st.one_of(st.just("?"), st.integers(1, 9),
              st.sets(st.integers(1, 9), min_size=2, max_size=3).map(lambda s: tuple(sorted(s)))),
)


@given(refs, st.one_of(st.none(), st.integers(1, 99)))
def test_concept_ref_round_trip(ref, occurrence):
    if occurrence is not None:
        ref = ConceptRef(ref.headword, ref.homograph, ref.sense, occurrence)
    assert parse_concept_ref(render_concept_ref(ref)) == ref


def test_parse_lexicon_shipped(records):
    assert len(records) == 12
    assert records[0].headword == "ajusteur" and records[0].definition == "qui ajuste des pièces de métal"
    assert all(r.homograph == 1 and r.sense == 1 for r in records)


def test_parse_lexicon_usage_and_comments():
    text = "# c\n\nchat|II|2|NOM|un animal|le chat dort\n"
    [r] = parse_lexicon(text)
    assert (r.homograph, r.sense, r.usage) == (2, 2, "le chat dort")


@pytest.mark.parametrize("line, fragment", [
    ("a|I|1|NOM", "fields"),
    ("a|1|1|NOM|x|", "roman"),
    ("a|I|0|NOM|x|", "sense"),
    ("a|I|1|PRONOM|x|", "POS"),
    ("a b|I|1|NOM|x|", "headword"),
])
def test_lexicon_errors_carry_line(line, fragment):
    with pytest.raises(LexiconError, match=fragment) as info:
        parse_lexicon("# header\n" + line + "\n")
    assert info.value.line == 2


def test_duplicate_entry():
    with pytest.raises(LexiconError, match="duplicate"):
        parse_lexicon("a|I|1|NOM|x|\na|I|1|NOM|y|\n")


def test_bad_utf8():
    with pytest.raises(LexiconError) as info:
        parse_lexicon(b"a|I|1|NOM|x|\n\xff|I|1|NOM|y|\n")
    assert info.value.line == 2


def test_lemmas(records):
    index = LexiconIndex(records)
    assert index.lemma("pièces", "NOM") == ("pièce", True)
    assert index.lemma("ajuste", "VERBE") == ("ajuster", True)
    assert index.lemma("plate", "ADJECTIF") == ("plat", True)
    assert index.lemma("orne", "VERBE") == ("orner", False)
    assert index.lemma("corps", "NOM") == ("corps", False)
    assert "orner" in lemma_candidates("ornent", "VERBE")


def test_tags(records):
    index = LexiconIndex(records)
    assert index.tags("plante") == {"NOM"}
    assert index.tags("public") == {"ADJECTIF"}
    assert index.tags("zzz") == {"?"}


def test_decomposed_accents_name_the_same_concept():
    decomposed = "ge\u0301ranium"
    assert ConceptRef(decomposed, 1, 1) == parse_concept_ref("géranium I 1")
    assert parse_lexicon(f"{decomposed}|I|1|NOM|une plante|\n")[0].headword == "géranium"

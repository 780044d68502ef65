"""Default slot table of the dictionary knowledge base."""
from __future__ import annotations

from .frames import KnowledgeBase, SlotDefinition

POS_CLASS = {"NOM": "NOMS", "VERBE": "VERBES", "ADJECTIF": "ADJECTIFS", "ADVERBE": "ADVERBES"}
SEMANTIC_CLASS = {"NOM": "ENTITES", "VERBE": "ACTIONS/EVENEMENTS", "ADJECTIF": "QUALITES"}
PHRASAL_CLASS = {"NOM": "NOMINALES", "VERBE": "VERBALES", "ADJECTIF": "ADJECTIVALES",
                 "ADVERBE": "ADVERBIALES"}
LEVEL_ATTRIBUTE_CLASS = {
    "general-info": "INFO-GENERALE",
    "definitory": "DEFINITOIRES",
    "syntagmatic": "SYNTAGMATIQUES",
    "relational": "RELATIONNELS",
}

HYPERNYM = "HYPERONYME"
HYPONYM = "HYPONYME"
SYNONYMS = "SYNONYMES"
DEFINED_BY = "DEFINI-PAR"
DEFINITION_OF = "DEFINITION-DE"
KIND_OF = "SORTE-DE"
CANDIDATES = "CANDIDATS"

DEF_SLOTS = ("DEF-CLASSIQUE", "DEF-RENDRE", "DEF-QUI", "DEF-SORTED")


def _rel(name: str, role: str = "UNION", inverse: str | None = "+INV") -> SlotDefinition:
    if inverse == "+INV":
        inverse = name + "+INV"
    return SlotDefinition(name, "relational", inverse, role, "unit-ref")


def default_slot_definitions() -> list[SlotDefinition]:
    info = [
        SlotDefinition("GROUPE-CATEGORIEL", "general-info", value_kind="literal"),
        SlotDefinition("TEXTE-DEFINITION", "general-info", value_kind="text"),
        SlotDefinition("TEXTE", "general-info", value_kind="text"),
        SlotDefinition("USAGE", "general-info", value_kind="text"),
        SlotDefinition(CANDIDATES, "general-info"),
        SlotDefinition("SENS", "dictionary", inverse="MOTS-ENTREE"),
    ]
    definitory = [
        SlotDefinition("DEF-CLASSIQUE", "definitory", correspondents=((DEFINED_BY, None),)),
        SlotDefinition("DEF-RENDRE", "definitory", correspondents=(("RENDRE", None),)),
        SlotDefinition("DEF-QUI", "definitory", correspondents=(("QUI", None),)),
        SlotDefinition("DEF-SORTED", "definitory", correspondents=((DEFINED_BY, None),)),
        SlotDefinition("DE", "syntagmatic", correspondents=(
            ("ORIGINE", None), ("POSSESSEUR", None), ("MATIERE", None), ("OBJECTIF", None))),
        SlotDefinition("OBJET", "syntagmatic", correspondents=(("THEME", None),)),
        SlotDefinition("EPITHETE", "syntagmatic", correspondents=(("CARACTERISTIQUE", None),)),
        SlotDefinition("AVEC", "syntagmatic", correspondents=(("INSTRUMENT", None),)),
    ]
    relational = [
        SlotDefinition(HYPERNYM, "relational", HYPONYM, "UNION", taxonomic="parents"),
        SlotDefinition(SYNONYMS, "relational", SYNONYMS, "INHIBIT"),
        SlotDefinition("ANTONYMES", "relational", "ANTONYMES", "INHIBIT"),
        _rel(DEFINED_BY, "INHIBIT", DEFINITION_OF),
        _rel(KIND_OF, "INHIBIT"),
        _rel("CARACTERISTIQUE"),
        _rel("OBJECTIF"),
        _rel("ORIGINE"),
        _rel("POSSESSEUR"),
        _rel("MATIERE"),
        _rel("INSTRUMENT"),
        _rel("RENDRE", "INHIBIT"),
        _rel("QUI", "INHIBIT"),
        _rel("CE-QUI", "INHIBIT"),
        _rel("QUI-A"),
        _rel("POSSESSION"),
        _rel("THEME", "INHIBIT"),
        _rel("AGENT", "INHIBIT"),
        _rel("PARTIE-DE"),
        _rel("MEMBRE-DE"),
        _rel("LOCATIF"),
    ]
    return info + definitory + relational


def new_dkb() -> KnowledgeBase:
    return KnowledgeBase(default_slot_definitions())


def relational_facets(kb: KnowledgeBase, relation: str) -> tuple[dict, dict]:
    """Facets for a relational value and for its mirrored inverse value."""
    inverse = kb.slot(relation).inverse
    facets = {"CLASSE-ATTRIBUT": "RELATIONNELS"}
    back = {"CLASSE-ATTRIBUT": "RELATIONNELS"}
    if inverse:
        facets["INVERSES-CORRESPONDANTS"] = inverse
        back["INVERSES-CORRESPONDANTS"] = relation
    return facets, back


def assert_relation(kb: KnowledgeBase, source: str, relation: str, target: str) -> bool:
    facets, back = relational_facets(kb, relation)
    return kb.add_value(source, relation, target, facets, back)

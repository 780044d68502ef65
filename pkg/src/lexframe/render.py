"""Text listings of frames in the dictionary's own notation."""
from __future__ import annotations

from typing import Any

from .frames import KnowledgeBase

VIEWS = ("definitory", "relational")
LEVEL_ORDER = ("general-info", "definitory", "syntagmatic", "relational")
FACET_ORDER = ("CLASSE-ATTRIBUT", "INVERSES-CORRESPONDANTS", "DETERMINATION", "GENRE", "NOMBRE",
               "MODE", "ASPECT", "TEMPS", "PERSONNE", "RELATIONNELS-CORRESPONDANTS")


def unit_label(kb: KnowledgeBase, uid: str) -> str:
    """Class names print bare, everything else between bars."""
    if uid in kb and kb.unit(uid).kind == "kb-class":
        return uid
    return f"|{uid}|"


def format_scalar(value: Any) -> str:
    if isinstance(value, float):
        return format(value, "g")
    return str(value)


def ordered_facets(facets: dict[str, Any]) -> list[tuple[str, Any]]:
    listed = [r.strip() for r in str(facets.get("RELATIONNELS-CORRESPONDANTS", "")).split(",") if r.strip()]
    order = list(FACET_ORDER) + listed
    known = [(k, facets[k]) for k in order if k in facets]
    rest = sorted((k, v) for k, v in facets.items() if k not in order)
    return list(dict.fromkeys(known + rest))


def format_value(kb: KnowledgeBase, slot: str, value: Any) -> str:
    kind = kb.slot(slot).value_kind
    if kind == "unit-ref":
        return unit_label(kb, value)
    if kind == "text":
        return f'"{value}"'
    return format_scalar(value)


def render_frame(kb: KnowledgeBase, uid: str, view: str = "definitory") -> str:
    """Listing of one unit.

    The definitory view shows parent links only for phrasal concepts and
    leaves relational slots out; the relational view shows both.
    """
    if view not in VIEWS:
        raise ValueError(f"view must be one of {VIEWS}")
    unit = kb.unit(uid)
    lines = [unit_label(kb, uid) if unit.kind == "kb-class" else f"|{uid}|"]
    if unit.parents and (view == "relational" or unit.kind == "phrasal-concept"):
        lines.append("SUBCLASS.OF: " + ", ".join(unit_label(kb, p) for p in unit.parents))
    if unit.memberships:
        lines.append("MEMBER.OF: " + ", ".join(unit_label(kb, m) for m in unit.memberships))
    levels = LEVEL_ORDER if view == "relational" else LEVEL_ORDER[:3]
    names = [n for n, vals in unit.slots.items()
             if vals and kb.slot_definitions.get(n) and kb.slot(n).level in levels]
    names.sort(key=lambda n: (levels.index(kb.slot(n).level), n))
    for name in names:
        for sv in unit.slots[name]:
            lines.append(f"{name}: {format_value(kb, name, sv.value)}")
            lines += [f"  {k}: {format_scalar(v)}" for k, v in ordered_facets(sv.facets)]
    return "\n".join(lines) + "\n"

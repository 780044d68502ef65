"""Frame-based dictionary knowledge base: definition parsing, enrichment and deduction."""
from importlib import resources

from .frames import KnowledgeBase, export_snapshot, import_snapshot, violations
from .lexicon import ConceptRef, EntryRecord, parse_concept_ref, parse_lexicon, render_concept_ref

__version__ = "0.1.0"


def data_text(name: str) -> str:
    """Contents of a file shipped in the package data directory."""
    return resources.files(__package__).joinpath("data", name).read_text(encoding="utf-8")


__all__ = [
    "ConceptRef", "EntryRecord", "KnowledgeBase", "data_text", "export_snapshot",
    "import_snapshot", "parse_concept_ref", "parse_lexicon", "render_concept_ref", "violations",
]

"""Lexicon ingestion and concept references.

The lexicon is a pipe-separated UTF-8 file, one sense per line::

    headword|homograph|sense|POS|definition|usage

``#`` starts a comment line.  Concept references follow the dictionary
notation ``headword homograph sense#occurrence`` with ``?`` for unknown
parts and ``i/j`` for a set of candidate senses, e.g. ``plante I 1#3``,
``panser I ?``, ``donner I 5/6`` or ``faculté ? ?``.
"""
from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from typing import Union

POS_TAGS = ("NOM", "VERBE", "ADJECTIF", "ADVERBE")
UNKNOWN = "?"

Homograph = Union[int, str, None]            # int, "?" or absent
Sense = Union[int, str, tuple, None]         # int, "?", tuple of candidates or absent


class LexiconError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class ConceptRefError(ValueError):
    pass


_ROMAN = (
    (1000, "M"), (900, "CM"), (500, "D"), (400, "CD"), (100, "C"), (90, "XC"),
    (50, "L"), (40, "XL"), (10, "X"), (9, "IX"), (5, "V"), (4, "IV"), (1, "I"),
)


def to_roman(n: int) -> str:
    if not 0 < n < 4000:
        raise ValueError(f"homograph index {n} outside 1..3999")
    out = []
    for value, symbol in _ROMAN:
        while n >= value:
            out.append(symbol)
            n -= value
    return "".join(out)


def from_roman(text: str) -> int:
    """Parse a canonical roman numeral; anything else raises ValueError."""
    i, n = 0, 0
    for value, symbol in _ROMAN:
        while text.startswith(symbol, i):
            n += value
            i += len(symbol)
    if i != len(text) or n == 0 or to_roman(n) != text:
        raise ValueError(f"not a roman numeral: {text!r}")
    return n


def normalize(text: str) -> str:
    return unicodedata.normalize("NFC", text)


@dataclass(frozen=True)
class ConceptRef:
    headword: str
    homograph: Homograph = None
    sense: Sense = None
    occurrence: int | None = None

    def __post_init__(self) -> None:
        if isinstance(self.headword, str):
            # composed and decomposed accents must name the same concept
            object.__setattr__(self, "headword", normalize(self.headword))
        if not self.headword or any(c.isspace() or c in "|#" for c in self.headword):
            raise ConceptRefError(f"bad headword {self.headword!r}")
        if self.homograph is not None and self.homograph != UNKNOWN:
            if not isinstance(self.homograph, int) or self.homograph < 1:
                raise ConceptRefError(f"bad homograph {self.homograph!r}")
        if self.sense is not None:
            if self.homograph is None:
                raise ConceptRefError("a sense needs a homograph")
            if isinstance(self.sense, tuple):
                if len(self.sense) < 2 or any(not isinstance(s, int) or s < 1 for s in self.sense) \
                        or list(self.sense) != sorted(set(self.sense)):
                    raise ConceptRefError(f"candidate senses must be >= 2 distinct ascending: {self.sense}")
            elif self.sense != UNKNOWN and (not isinstance(self.sense, int) or self.sense < 1):
                raise ConceptRefError(f"bad sense {self.sense!r}")
        if self.occurrence is not None:
            if self.sense is None or not isinstance(self.occurrence, int) or self.occurrence < 1:
                raise ConceptRefError("an occurrence needs homograph, sense and a positive index")

    @property
    def resolved(self) -> bool:
        return isinstance(self.homograph, int) and isinstance(self.sense, int)

    @property
    def ambiguity(self) -> str | None:
        """HOMOGRAPHE, SENSE or COMPLEX for unresolved references."""
        if self.homograph == UNKNOWN:
            return "HOMOGRAPHE"
        if self.sense == UNKNOWN:
            return "SENSE"
        if isinstance(self.sense, tuple):
            return "COMPLEX"
        return None

    def base(self) -> "ConceptRef":
        """The reference without its phrasal occurrence."""
        return ConceptRef(self.headword, self.homograph, self.sense)

    def __str__(self) -> str:
        return render_concept_ref(self)


def render_concept_ref(ref: ConceptRef) -> str:
    parts = [ref.headword]
    if ref.homograph is not None:
        parts.append(UNKNOWN if ref.homograph == UNKNOWN else to_roman(ref.homograph))
    if ref.sense is not None:
        if isinstance(ref.sense, tuple):
            parts.append("/".join(map(str, ref.sense)))
        else:
            parts.append(str(ref.sense))
    text = " ".join(parts)
    if ref.occurrence is not None:
        text += f"#{ref.occurrence}"
    return text


_REF_RE = re.compile(r"^([^\s|]+?)(?:\s+([^\s|]+?))?(?:\s+([^\s#|]+))?(?:#(\d+))?$")


def parse_concept_ref(text: str) -> ConceptRef:
    """Parse ``headword [homograph|?] [sense|?|i/j...] [#k]`` (pipes optional)."""
    text = normalize(text.strip().replace("\u00a0", " ").replace("\u2009", " "))
    if len(text) > 1 and text[0] == text[-1] == "|":
        text = text[1:-1].strip()
    m = _REF_RE.match(text)
    if not m:
        raise ConceptRefError(f"malformed concept reference {text!r}")
    head, hom, sense, occ = m.groups()
    if "#" in head or (hom and "#" in hom):
        # "plante#3" style without sense is not allowed
        raise ConceptRefError(f"malformed concept reference {text!r}")
    try:
        homograph: Homograph = None
        if hom is not None:
            homograph = UNKNOWN if hom == UNKNOWN else from_roman(hom)
        parsed: Sense = None
        if sense is not None:
            if sense == UNKNOWN:
                parsed = UNKNOWN
            elif "/" in sense:
                parsed = tuple(sorted({int(s) for s in sense.split("/")}))
            else:
                parsed = int(sense)
                if str(parsed) != sense:
                    raise ValueError(sense)
        ref = ConceptRef(head, homograph, parsed, int(occ) if occ else None)
    except (ValueError, ConceptRefError) as exc:
        raise ConceptRefError(f"malformed concept reference {text!r}: {exc}") from None
    return ref


@dataclass(frozen=True)
class EntryRecord:
    headword: str
    homograph: int
    sense: int
    pos: str
    definition: str = ""
    usage: str | None = None

    @property
    def ref(self) -> ConceptRef:
        return ConceptRef(self.headword, self.homograph, self.sense)


def parse_lexicon(data: bytes | str) -> list[EntryRecord]:
    """Read lexicon lines into records, in file order."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            line = data[:exc.start].count(b"\n") + 1
            raise LexiconError("input is not valid UTF-8", line) from None
    records: list[EntryRecord] = []
    seen: dict[tuple[str, int, int], int] = {}
    for lineno, raw in enumerate(data.splitlines(), start=1):
        line = normalize(raw.strip())
        if not line or line.startswith("#"):
            continue
        fields = line.split("|")
        if len(fields) not in (5, 6):
            raise LexiconError(f"expected 6 '|'-separated fields, got {len(fields)}", lineno)
        head, hom, sense, pos, definition = (f.strip() for f in fields[:5])
        usage = fields[5].strip() if len(fields) == 6 and fields[5].strip() else None
        if not head or any(c.isspace() or c in "#" for c in head):
            raise LexiconError(f"bad headword {head!r}", lineno)
        try:
            homograph = from_roman(hom)
        except ValueError:
            raise LexiconError(f"homograph must be a roman numeral, got {hom!r}", lineno) from None
        if not sense.isdigit() or int(sense) < 1:
            raise LexiconError(f"sense must be an integer >= 1, got {sense!r}", lineno)
        if pos not in POS_TAGS:
            raise LexiconError(f"unknown POS {pos!r}", lineno)
        key = (head, homograph, int(sense))
        if key in seen:
            raise LexiconError(f"duplicate entry {head} {hom} {sense} (first on line {seen[key]})", lineno)
        seen[key] = lineno
        records.append(EntryRecord(head, homograph, int(sense), pos, definition, usage))
    return records


OPEN_POS = ("NOM", "VERBE", "ADJECTIF", "ADVERBE")


def lemma_candidates(token: str, pos: str) -> list[str]:
    """Possible citation forms of an inflected definition token.

    Only the handful of regular French endings that show up in dictionary
    definitions are undone; anything else is returned unchanged.
    """
    t = token
    out = [t]
    if pos == "NOM":
        if len(t) > 2 and t[-1] in "sx":
            out.append(t[:-1])
    elif pos == "ADJECTIF":
        bases = [t] + ([t[:-1]] if len(t) > 2 and t.endswith("s") else [])
        out = list(bases)
        out += [b[:-1] for b in bases if len(b) > 2 and b.endswith("e")]
    elif pos == "VERBE":
        if t.endswith("ent") and len(t) > 4:
            out.append(t[:-3] + "er")
        if t.endswith("e"):
            out.append(t + "r")
        if t.endswith("it"):
            out.append(t[:-1] + "r")
        if t.endswith("d"):
            out.append(t + "re")
    return list(dict.fromkeys(out))


def default_lemma(token: str, pos: str) -> str:
    """Citation form guessed for a token that is not in the lexicon."""
    if pos == "VERBE":
        if token.endswith(("er", "ir", "re")):
            return token
        candidates = lemma_candidates(token, pos)
        return candidates[1] if len(candidates) > 1 else token
    # -s after a vowel or s/p/u is usually part of the word (corps, bois, repas)
    if pos in ("NOM", "ADJECTIF") and len(token) > 3 and token.endswith("s") \
            and token[-2] not in "aiopsu":
        return token[:-1]
    return token


class LexiconIndex:
    """Headword lookup over a list of records."""

    def __init__(self, records: list[EntryRecord]):
        self.records = list(records)
        self._by_head: dict[str, list[EntryRecord]] = {}
        for r in self.records:
            self._by_head.setdefault(r.headword, []).append(r)

    def __contains__(self, headword: object) -> bool:
        return headword in self._by_head

    def senses(self, headword: str, pos: str | None = None) -> list[EntryRecord]:
        found = self._by_head.get(headword, [])
        return [r for r in found if pos is None or r.pos == pos]

    def headwords(self) -> list[str]:
        return sorted(self._by_head)

    def lemma(self, token: str, pos: str) -> tuple[str, bool]:
        """(lemma, found-in-lexicon) for a token read as ``pos``."""
        for cand in lemma_candidates(token, pos):
            if self.senses(cand, pos):
                return cand, True
        return default_lemma(token, pos), False

    def tags(self, token: str) -> frozenset[str]:
        found = frozenset(p for p in OPEN_POS if self.lemma(token, p)[1])
        return found or frozenset({UNKNOWN})

"""Command-line front end: pipeline steps, consultation commands and a REPL.

Exit codes: 1 usage, 2 bad data, 3 internal failure.
"""
from __future__ import annotations

import argparse
import difflib
import json
import os
import shlex
import sys
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from . import __version__, data_text
from .build import DEFAULT_THRESHOLD, build_all
from .enrich import enrich, stats
from .frames import (CONCEPT_KINDS, FrameError, KnowledgeBase, SnapshotError, export_snapshot, import_snapshot)
from .inference import (DEFAULT_DEPTH, InferenceError, Registry, parse_rules, query_relation,
                        resolve_relation_alias)
from .lexicon import ConceptRefError, LexiconError, parse_concept_ref, parse_lexicon
from .patterns import PatternError, compile_hierarchy
from .render import VIEWS, render_frame
from .schema import DEF_SLOTS, new_dkb

EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 1, 2, 3
RULES_ENV = "LEXFRAME_RULES"
DATA_ERRORS = (LexiconError, PatternError, SnapshotError, ConceptRefError, InferenceError,
               FrameError, OSError, UnicodeDecodeError)


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


@dataclass
class Result:
    kind: str
    payload: dict[str, Any]
    lines: list[str] = field(default_factory=list)

    def render(self, as_json: bool) -> str:
        if as_json:
            return json.dumps(self.payload, sort_keys=True, ensure_ascii=False, indent=1)
        return "\n".join(self.lines)


@dataclass
class Session:
    kb_path: str | None = None
    rules_path: str | None = None
    _kb: KnowledgeBase | None = None
    _registry: Registry | None = None

    def kb(self) -> KnowledgeBase:
        if self._kb is None:
            if not self.kb_path:
                raise UsageError("no knowledge base loaded; pass --kb <snapshot>")
            self._kb = import_snapshot(Path(self.kb_path).read_bytes(), frozen=True)
        return self._kb

    def registry(self) -> Registry:
        if self._registry is None:
            path = self.rules_path or os.environ.get(RULES_ENV)
            text = Path(path).read_text(encoding="utf-8") if path else data_text("rules.txt")
            self._registry = parse_rules(text, Registry(self.kb()))
        return self._registry


# -- helpers -------------------------------------------------------------------------

def _read_text(path: str | None, default: str) -> str:
    if path is None:
        return data_text(default)
    return Path(path).read_text(encoding="utf-8")


def _write(path: str | None, data: bytes) -> None:
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(path).write_bytes(data)


def resolve_ref(kb: KnowledgeBase, text: str) -> str:
    """Unit id for a concept reference; a bare headword works when it has one sense."""
    ref = parse_concept_ref(text)
    uid = str(ref)
    if uid in kb and kb.unit(uid).kind in CONCEPT_KINDS:
        return uid
    if ref.homograph is None and ref.headword in kb and kb.unit(ref.headword).kind == "entry":
        senses = [sv.value for sv in kb.unit(ref.headword).slots.get("SENS", [])]
        if len(senses) == 1:
            return senses[0]
        raise DataError(f"{ref.headword!r} has {len(senses)} senses; name one, e.g. \"{senses[0]}\"")
    raise DataError(f"no concept |{uid}| in the knowledge base")


def _relational_pairs(kb: KnowledgeBase, uid: str) -> set[tuple[str, str]]:
    pairs = set()
    for name, definition in kb.slot_definitions.items():
        if definition.level == "relational" and definition.value_kind == "unit-ref":
            pairs.update((name, sv.value) for sv in kb.inherited_values(uid, name))
    return pairs


def _pair_rows(pairs) -> list[dict[str, str]]:
    return [{"relation": r, "value": v} for r, v in sorted(pairs)]


# -- commands ----------------------------------------------------------------------------

def cmd_build(ns, session: Session) -> Result:
    records = parse_lexicon(_read_text(ns.lexicon, "golden_lexicon.txt"))
    hierarchy = compile_hierarchy(_read_text(ns.patterns, "patterns.txt"))
    if not 0.0 <= ns.threshold <= 1.0:
        raise UsageError("--threshold must lie in [0, 1]")
    kb = new_dkb()
    report = build_all(records, hierarchy, kb, ns.threshold)
    kb.freeze()
    if ns.out:
        _write(ns.out, export_snapshot(kb))
    return Result("build", report.to_json(), report.render().splitlines())


def cmd_enrich(ns, session: Session) -> Result:
    kb = import_snapshot(Path(ns.input).read_bytes())
    report = enrich(kb)
    kb.freeze()
    if ns.out:
        _write(ns.out, export_snapshot(kb))
    if ns.report:
        Path(ns.report).write_text(report.render(as_json=ns.json) + "\n", encoding="utf-8")
    return Result("enrich", report.to_json(), report.render().splitlines())


def cmd_stats(ns, session: Session) -> Result:
    before = Path(ns.before).read_bytes() if ns.before else None
    report = stats(session.kb(), before)
    return Result("stats", report.to_json(), [report.render()])


def cmd_export(ns, session: Session) -> Result:
    _write(ns.out, export_snapshot(session.kb()))
    return Result("export", {}, [])


def cmd_import(ns, session: Session) -> Result:
    data = sys.stdin.buffer.read() if ns.input == "-" else Path(ns.input).read_bytes()
    _write(ns.out, export_snapshot(import_snapshot(data)))
    return Result("import", {}, [])


def cmd_lookup(ns, session: Session) -> Result:
    kb = session.kb()
    word = ns.word
    senses = []
    if word in kb and kb.unit(word).kind == "entry":
        for sv in kb.unit(word).slots.get("SENS", []):
            unit = kb.unit(sv.value)
            text = unit.slots.get("TEXTE-DEFINITION")
            senses.append({"concept": sv.value, "pos": unit.pos or "",
                           "definition": text[0].value if text else ""})
    payload: dict[str, Any] = {"word": word, "senses": senses}
    if senses:
        lines = [f"|{s['concept']}|  {s['pos']}  {s['definition']}" for s in senses]
    else:
        entries = sorted(u for u, unit in kb.units.items() if unit.kind == "entry")
        prefix = os.path.commonprefix
        ranked = sorted(entries, key=lambda e: (-len(prefix([e, word])), e))
        near = [e for e in ranked if prefix([e, word])][:5]
        payload["suggestions"] = near or difflib.get_close_matches(word, entries, n=5, cutoff=0.0)
        lines = [f"no entry for {word!r}"]
        if payload["suggestions"]:
            lines.append("nearest: " + ", ".join(payload["suggestions"]))
    return Result("lookup", payload, lines)


def _relation_name(kb: KnowledgeBase, text: str, session: Session) -> str:
    if text in kb.slot_definitions:
        return text
    try:
        return resolve_relation_alias(text, session.registry())
    except ConceptRefError:
        raise DataError(f"unknown relation {text}") from None


def cmd_rel(ns, session: Session) -> Result:
    kb = session.kb()
    uid = resolve_ref(kb, ns.concept)
    relation = _relation_name(kb, ns.relation, session)
    if ns.depth < 1:
        raise UsageError("--depth must be at least 1")
    facts = query_relation(uid, relation, kb, session.registry(), deduce=ns.deduce,
                           depth=ns.depth, inherit=not ns.no_inherit)
    values = []
    lines = []
    for f in facts:
        row: dict[str, Any] = {"value": f.value, "provenance": f.provenance}
        lines.append(f"|{f.value}|  {f.provenance}")
        if f.provenance == "derived":
            row["trace"] = f.trace_lines()
            lines += ["    " + t for t in row["trace"]]
        values.append(row)
    return Result("rel", {"concept": uid, "relation": relation, "values": values}, lines)


def cmd_common(ns, session: Session) -> Result:
    kb = session.kb()
    a, b = resolve_ref(kb, ns.first), resolve_ref(kb, ns.second)
    rows = _pair_rows(_relational_pairs(kb, a) & _relational_pairs(kb, b))
    lines = [f"{r['relation']}  |{r['value']}|" for r in rows]
    return Result("common", {"first": a, "second": b, "common": rows}, lines)


def cmd_diff(ns, session: Session) -> Result:
    kb = session.kb()
    a, b = resolve_ref(kb, ns.first), resolve_ref(kb, ns.second)
    pa, pb = _relational_pairs(kb, a), _relational_pairs(kb, b)
    payload = {"first": a, "second": b, "only_first": _pair_rows(pa - pb), "only_second": _pair_rows(pb - pa)}
    lines = []
    for key, uid in (("only_first", a), ("only_second", b)):
        lines.append(f"only |{uid}|:")
        lines += [f"  {r['relation']}  |{r['value']}|" for r in payload[key]]
    return Result("diff", payload, lines)


def thesaurus(kb: KnowledgeBase, uid: str, hops: int) -> list[dict[str, Any]]:
    """Breadth-first neighbourhood grouped by the relation path that first reaches each concept."""
    adjacency: dict[str, list[tuple[str, str]]] = {}
    for src, rel, tgt in kb.arcs():
        adjacency.setdefault(src, []).append((rel, tgt))
    paths: dict[str, tuple[str, ...]] = {uid: ()}
    reported: dict[str, tuple[str, ...]] = {}
    queue = deque([uid])
    while queue:
        node = queue.popleft()
        path = paths[node]
        if len(path) >= hops:
            continue
        for rel, nxt in adjacency.get(node, []):
            if nxt in paths:
                continue
            paths[nxt] = path + (rel,)
            queue.append(nxt)
            shown = nxt
            while kb.unit(shown).kind == "phrasal-concept" and kb.concept_parents(shown):
                shown = kb.concept_parents(shown)[0]
            if shown != uid and shown not in reported:
                reported[shown] = paths[nxt]
    groups: dict[tuple[str, ...], list[str]] = {}
    for concept, path in reported.items():
        groups.setdefault(path, []).append(concept)
    return [{"path": " ".join(p), "concepts": sorted(groups[p])}
            for p in sorted(groups, key=lambda p: (len(p), p))]


def cmd_thesaurus(ns, session: Session) -> Result:
    kb = session.kb()
    uid = resolve_ref(kb, ns.concept)
    if ns.hops < 1:
        raise UsageError("--hops must be at least 1")
    groups = thesaurus(kb, uid, ns.hops)
    lines = [f"{g['path']}: " + ", ".join(f"|{c}|" for c in g["concepts"]) for g in groups]
    return Result("thesaurus", {"concept": uid, "hops": ns.hops, "groups": groups}, lines)


def usage_examples(kb: KnowledgeBase, uid: str) -> list[dict[str, Any]]:
    """Phrasal concepts built on ``uid``, with the definitions they take part in."""
    serves: dict[str, list[str]] = {}
    for definiendum, unit in kb.units.items():
        stack = [sv.value for slot in DEF_SLOTS for sv in unit.slots.get(slot, [])]
        seen: set[str] = set()
        while stack:
            node = stack.pop()
            if node in seen or kb.unit(node).kind != "phrasal-concept":
                continue
            seen.add(node)
            serves.setdefault(node, []).append(definiendum)
            for name, values in kb.unit(node).slots.items():
                if kb.slot(name).level == "syntagmatic":
                    stack += [sv.value for sv in values]
    found = []
    for pid, unit in kb.units.items():
        if unit.kind != "phrasal-concept":
            continue
        used = set(unit.parents)
        for name, values in unit.slots.items():
            if kb.slot(name).level == "syntagmatic":
                used.update(sv.value for sv in values)
        if uid in used:
            text = unit.slots.get("TEXTE")
            found.append({"phrasal": pid, "text": text[0].value if text else "",
                          "serves": sorted(set(serves.get(pid, [])))})
    return found


def cmd_examples(ns, session: Session) -> Result:
    kb = session.kb()
    uid = resolve_ref(kb, ns.concept)
    found = usage_examples(kb, uid)
    lines = [f"\"{e['text']}\"  |{e['phrasal']}|  serving " + ", ".join(f"|{s}|" for s in e["serves"])
             for e in found]
    return Result("examples", {"concept": uid, "examples": found}, lines)


def cmd_frame(ns, session: Session) -> Result:
    kb = session.kb()
    uid = resolve_ref(kb, ns.concept)
    listing = render_frame(kb, uid, ns.view).rstrip("\n").splitlines()
    return Result("frame", {"concept": uid, "view": ns.view, "frame": listing}, listing)


def cmd_repl(ns, session: Session) -> Result:
    interactive = sys.stdin.isatty()
    while True:
        if interactive:
            print("> ", end="", flush=True)
        line = sys.stdin.readline()
        if not line:
            break
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line in ("quit", "exit"):
            break
        try:
            argv = shlex.split(line)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            continue
        if argv and argv[0] == "repl":
            print("error: already in the REPL", file=sys.stderr)
            continue
        execute(argv, session, default_json=ns.json)
    return Result("repl", {}, [])


# -- parser and dispatch ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lexframe", description="Dictionary knowledge base tools.")
    parser.add_argument("--version", action="version", version=f"lexframe {__version__}")
    parser.add_argument("--kb", help="knowledge-base snapshot to query")
    parser.add_argument("--rules", help=f"triples/rules/alias file (default ${RULES_ENV} or shipped)")
    parser.add_argument("--json", action="store_true", help="sorted-key JSON output")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    commands: dict[str, Callable] = {}

    def add(name: str, func: Callable, help: str) -> argparse.ArgumentParser:
        commands[name] = func
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=func)
        return p

    p = add("build", cmd_build, "build a knowledge base from a lexicon")
    p.add_argument("--lexicon", help="lexicon file (default: shipped sample corpus)")
    p.add_argument("--patterns", help="pattern file (default: shipped patterns)")
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--out", help="snapshot output path ('-' for stdout)")
    p = add("enrich", cmd_enrich, "run the enrichment passes over a snapshot")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.add_argument("--report")
    p = add("stats", cmd_stats, "unit and arc counts")
    p.add_argument("--before", help="earlier snapshot to compare arc counts with")
    p = add("export", cmd_export, "write the loaded snapshot in canonical form")
    p.add_argument("--out")
    p = add("import", cmd_import, "validate a snapshot and re-emit it canonically")
    p.add_argument("--in", dest="input", default="-")
    p.add_argument("--out")
    p = add("lookup", cmd_lookup, "senses and definitions of a word")
    p.add_argument("word")
    p = add("rel", cmd_rel, "values of a relation on a concept")
    p.add_argument("concept")
    p.add_argument("relation", help="relation name, or a concept that names a relation")
    p.add_argument("--deduce", action="store_true")
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--no-inherit", action="store_true")
    for name, func, text in (("common", cmd_common, "relation values two concepts share"),
                             ("diff", cmd_diff, "relation values only one concept has")):
        p = add(name, func, text)
        p.add_argument("first")
        p.add_argument("second")
    p = add("thesaurus", cmd_thesaurus, "related concepts within a few hops")
    p.add_argument("concept")
    p.add_argument("--hops", type=int, default=2)
    p = add("examples", cmd_examples, "phrasal concepts that use a concept")
    p.add_argument("concept")
    p = add("frame", cmd_frame, "print a frame listing")
    p.add_argument("concept")
    p.add_argument("--view", choices=VIEWS, default="definitory")
    add("repl", cmd_repl, "read commands from standard input")
    return parser


def execute(argv: list[str], session: Session | None = None, default_json: bool = False) -> int:
    """Run one command line; returns the exit code."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.command is None:
            raise UsageError(parser.format_usage())
        if session is None:
            session = Session(ns.kb, ns.rules)
        else:
            if ns.kb and ns.kb != session.kb_path:
                session.kb_path, session._kb, session._registry = ns.kb, None, None
            if ns.rules and ns.rules != session.rules_path:
                session.rules_path, session._registry = ns.rules, None
        ns.json = ns.json or default_json
        result = ns.func(ns, session)
        text = result.render(ns.json)
        if text and result.kind not in ("export", "import", "repl"):
            print(text)
        return 0
    except UsageError as exc:
        print(str(exc).rstrip(), file=sys.stderr)
        return EXIT_USAGE
    except (DataError, *DATA_ERRORS) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001 - last-resort report
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main(argv: list[str] | None = None) -> int:
    return execute(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())

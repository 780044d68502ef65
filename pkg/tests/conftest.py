from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lexframe import data_text, export_snapshot, parse_lexicon  # noqa: E402
from lexframe.build import build_all  # noqa: E402
from lexframe.enrich import enrich  # noqa: E402
from lexframe.frames import import_snapshot  # noqa: E402
from lexframe.patterns import compile_hierarchy  # noqa: E402
from lexframe.schema import new_dkb  # noqa: E402

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def hierarchy():
    return compile_hierarchy(data_text("patterns.txt"))


@pytest.fixture(scope="session")
def records():
    return parse_lexicon(data_text("golden_lexicon.txt"))


@pytest.fixture(scope="session")
def built_snapshot(hierarchy, records) -> bytes:
    kb = new_dkb()
    build_all(records, hierarchy, kb)
    return export_snapshot(kb)


@pytest.fixture(scope="session")
def enriched_snapshot(built_snapshot) -> bytes:
    kb = import_snapshot(built_snapshot)
    enrich(kb)
    return export_snapshot(kb)


@pytest.fixture
def golden_kb(built_snapshot):
    """A fresh, writable copy of the built sample knowledge base."""
    return import_snapshot(built_snapshot)


@pytest.fixture
def enriched_kb(enriched_snapshot):
    return import_snapshot(enriched_snapshot)


# -- acceptance summary -------------------------------------------------------------

_criteria: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria, key=lambda n: int(n.split("_")[2])):
        terminalreporter.write_line(f"{_criteria[name]}  {name}")

import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from onconet.ontology import load_seed  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def seed_graph():
    """The shipped seed; tests must copy it before mutating."""
    return load_seed()


@pytest.fixture
def seed(seed_graph):
    return seed_graph.copy()


@pytest.fixture
def fixed_clock(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
    return 1700000000


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion, in criterion order."""
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call":
                continue
            props = dict(rep.user_properties)
            if "acceptance" in props:
                note = f" [{props['note']}]" if "note" in props else ""
                lines.append((props["acceptance"], f"{'PASS' if rep.passed else 'FAIL'}  {props['acceptance']}{note}"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines, key=lambda item: int(item[0].split()[0])):
            terminalreporter.write_line(line)

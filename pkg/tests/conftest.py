from __future__ import annotations

import csv
import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from cforge.tables import DATA_DIR, TargetList, ingest_table

settings.register_profile(
    "default", max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

TEST_DATA = Path(__file__).resolve().parent / "data"


@pytest.fixture(scope="session")
def table():
    return ingest_table(None)


@pytest.fixture(scope="session")
def targets():
    return TargetList.load(DATA_DIR / "targets.jsonl")


@pytest.fixture(scope="session")
def witnesses():
    return json.loads((DATA_DIR / "witnesses.json").read_text())


def load_corpus() -> list[dict]:
    """Independent KnotInfo invariants for prime knots up to ten crossings."""
    with open(TEST_DATA / "knotinfo_corpus.csv", newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_report():
    """Record one PASS/FAIL line per acceptance criterion; printed at the end of the run."""

    def report(criterion: int, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qtangle.catalog import load_knot_table, load_tangle_table  # noqa: E402


@pytest.fixture(scope="session")
def knots():
    return load_knot_table()


@pytest.fixture(scope="session")
def tangles():
    return load_tangle_table()


@pytest.fixture(scope="session")
def jones_reference():
    from oracles import parse_laurent
    out = {}
    for line in (Path(__file__).parent / "data" / "jones9.tsv").read_text().splitlines():
        if line and not line.startswith("#"):
            name, text = line.split("\t")
            out[name] = parse_laurent(text)
    return out


# acceptance lines, repeated at the end of the run so they are easy to find
ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance():
    def report(number: int, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        ACCEPTANCE.append(line)
        print(line)
    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE, key=lambda l: int(l.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)

import random
from pathlib import Path

import pytest

from dnastash.huffman3 import build_table

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def table():
    return build_table()


@pytest.fixture
def rng():
    return random.Random(20240917)


@pytest.fixture(scope="session")
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, text = RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {text}")

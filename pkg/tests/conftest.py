from __future__ import annotations

import functools

import pytest

from gqldpc.codegen import derive_generator
from gqldpc.geom import LINES_AS_ROWS, POINTS_AS_ROWS, build_quadrangle
from gqldpc.qc import expand


@functools.lru_cache(maxsize=None)
def quadrangle(family: str, q: int):
    return build_quadrangle(family, q)


@functools.lru_cache(maxsize=None)
def code(family: str, q: int, orientation: str = POINTS_AS_ROWS):
    """(hrep, expanded H, prep, report) for a quadrangle code."""
    h = quadrangle(family, q).oriented(orientation)
    p, rep = derive_generator(h)
    return h, expand(h), p, rep


@pytest.fixture(scope="session")
def q53():
    return code("elliptic", 3, POINTS_AS_ROWS)


@pytest.fixture(scope="session")
def w35():
    return code("symplectic", 5, LINES_AS_ROWS)


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", help="run slow catalog rows")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="slow; use --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


# one line per acceptance criterion, printed after the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)

import os

import pytest


def pytest_addoption(parser):
    parser.addoption("--heavy", action="store_true", default=False,
                     help="run Leech-scale passes over all 196560^2 pairs")


def heavy_enabled(config) -> bool:
    return config.getoption("--heavy") or os.environ.get("SPHERECODE_HEAVY") == "1"


def pytest_collection_modifyitems(config, items):
    if heavy_enabled(config):
        return
    skip = pytest.mark.skip(reason="Leech-scale pass; enable with --heavy or SPHERECODE_HEAVY=1")
    for item in items:
        if "heavy" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def e8():
    from spherecode.codes import e8_roots
    return e8_roots()


@pytest.fixture(scope="session")
def leech():
    from spherecode.codes import leech_minimal
    return leech_minimal()


@pytest.fixture(scope="session")
def e8_cert():
    from spherecode.lpbound import catalog_certificate
    return catalog_certificate("e8_roots")


@pytest.fixture(scope="session")
def leech_cert():
    from spherecode.lpbound import catalog_certificate
    return catalog_certificate("leech_minimal")


# acceptance criteria record one line each; they are printed after the run

ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 11):
        terminalreporter.write_line(ACCEPTANCE_LINES.get(n, f"SKIP criterion {n:2d} (not run; Leech-scale criteria need --heavy)"))

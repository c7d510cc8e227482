import sys

import pytest

from nca import make_algebra, parse

P = 32003

ZOO_RELATIONS = {
    "POLY2": (["x", "y"], ["x*y - y*x"]),
    "QPLANE": (["x", "y"], ["x*y - 2*y*x"]),
    "JORDAN": (["x", "y"], ["x*y - y*x - x^2"]),
    "DUAL": (["x"], ["x^2"]),
    "CUSP": (["x"], ["x^3"]),
}


def zoo(name, p=P, assertions=()):
    names, rels = ZOO_RELATIONS[name]
    return make_algebra(names, [parse(r, names, p) for r in rels], p=p, assertions=assertions)


@pytest.fixture
def poly2():
    return zoo("POLY2")


@pytest.fixture
def qplane():
    return zoo("QPLANE")


@pytest.fixture
def cusp():
    return zoo("CUSP")


@pytest.fixture
def dual():
    return zoo("DUAL")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)

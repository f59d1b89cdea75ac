import sys
from pathlib import Path

import pytest

from homotopical.fincat import load_category
from homotopical.hstruct import load_structure
from homotopical.instances import cyclic_group, gen_groupoid_cylinder, interval

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
sys.path.insert(0, str(Path(__file__).resolve().parent))


def fixture_pair(cat_name, hs_name):
    return load_category(FIXTURES / cat_name), load_structure(FIXTURES / hs_name)


@pytest.fixture
def t1():
    return fixture_pair("t1.cat.json", "t1.hs.json")


@pytest.fixture
def p2():
    return fixture_pair("p2.cat.json", "p2.hs.json")


@pytest.fixture
def p2_bad_hat():
    return fixture_pair("p2.cat.json", "bad-hat.hs.json")


@pytest.fixture(scope="session")
def grp():
    return gen_groupoid_cylinder([cyclic_group(2, "Z2"), interval()])


# acceptance gate: one PASS/FAIL line per criterion in the terminal summary

CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        CRITERIA[n] = ("PASS" if rep.passed else "FAIL", title)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        status, title = CRITERIA[n]
        terminalreporter.write_line(f"{status} criterion {n}: {title}")

from pathlib import Path

import pytest
from hypothesis import strategies as st

from propweaken.formula import FALSE, TRUE, And, Atom, Iff, Implies, Not, Or
from propweaken.parser import load_spec

SPECS = Path(__file__).resolve().parent.parent / "specs"

NAMES = ["a", "b", "c", "d", "x", "y", "W_H", "L"]


def formulas(names=NAMES, max_leaves=20):
    leaves = st.one_of(st.just(TRUE), st.just(FALSE), st.sampled_from(names).map(Atom))
    return st.recursive(
        leaves,
        lambda sub: st.one_of(
            sub.map(Not),
            st.tuples(st.sampled_from([And, Or, Implies, Iff]), sub, sub).map(lambda t: t[0](t[1], t[2])),
        ),
        max_leaves=max_leaves,
    )


def models(names=NAMES):
    return st.fixed_dictionaries({n: st.booleans() for n in names})


@pytest.fixture
def drone():
    return load_spec(SPECS / "drone.wspec")


@pytest.fixture
def spec_path():
    return lambda name: str(SPECS / name)


_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and report.when == "call":
        n, title = marker.args
        _criteria.append((n, title, report.outcome, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n, title, result, duration in sorted(_criteria):
        mark = "PASS" if result == "passed" else "FAIL"
        terminalreporter.write_line(f"[{mark}] criterion {n}: {title} ({duration:.2f}s)")

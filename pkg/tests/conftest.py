from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from exmop.algebra import Poly, RatFunc, RatMat
from exmop.families.examples import example1, example2, example3, example4, example5

# deterministic property runs: same examples every time
settings.register_profile(
    "fixed",
    derandomize=True,
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("fixed")

fractions = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5))
nonzero_fractions = fractions.filter(bool)


@st.composite
def polys(draw, max_degree=4):
    return Poly(draw(st.lists(fractions, min_size=1, max_size=max_degree + 1)))


@st.composite
def nonzero_polys(draw, max_degree=3):
    p = draw(polys(max_degree))
    return p if not p.is_zero() else Poly([1])


@st.composite
def ratfuncs(draw):
    return RatFunc(draw(polys(3)), draw(nonzero_polys(2)))


@st.composite
def polymats(draw, n=2, max_degree=3):
    return RatMat([[draw(polys(max_degree)) for _ in range(n)] for _ in range(n)])


@pytest.fixture(scope="session")
def ex1():
    return example1(2, max_n=10, numeric_checks=True)


@pytest.fixture(scope="session")
def ex2():
    return example2(4, max_n=8, numeric_checks=True)


@pytest.fixture(scope="session")
def ex3():
    return example3(1, 0, max_n=6, numeric_checks=True)


@pytest.fixture(scope="session")
def ex4():
    return example4(Fraction(1, 2), 3, max_n=6, numeric_checks=True)


@pytest.fixture(scope="session")
def ex5():
    return {z: example5(2, z, max_n=8) for z in (0, 1, Fraction(3, 2))}


# one pass/fail line per acceptance criterion in the terminal summary
_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            _CRITERIA.setdefault(mark.args[0], [mark.args[1], []])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark and (rep.when == "call" or rep.failed):
        _CRITERIA[mark.args[0]][1].append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, results = _CRITERIA[num]
        if not results:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d}: {status:7s} {title}")

import pytest

from cochordal import Matrix, VertexOrdering, build_graph

FIX_A_EDGES = [("u", "u'"), ("u", "v'"), ("u", "w"), ("u'", "v'"), ("u'", "w"), ("v'", "w"), ("v", "w")]


@pytest.fixture
def fix_a():
    return build_graph(["u", "u'", "v'", "v", "w"], FIX_A_EDGES)


@pytest.fixture
def fix_b():
    return build_graph(["v", "u", "w", "u'"], [("v", "u"), ("u", "w"), ("w", "u'")])


@pytest.fixture
def htbes_a():
    """Hasse-based ordering of FIX-A used for the factor examples."""
    return VertexOrdering.from_positions({"w": 5, "v": 4, "v'": 3, "u'": 2, "u": 1})


@pytest.fixture
def pves_not_htbes_a():
    return VertexOrdering.from_positions({"v'": 5, "w": 4, "u'": 3, "u": 2, "v": 1})


@pytest.fixture
def not_pves_a():
    return VertexOrdering.from_positions({"v": 5, "u'": 4, "v'": 3, "w": 2, "u": 1})


@pytest.fixture
def pves_b():
    return VertexOrdering.from_positions({"u'": 4, "w": 3, "u": 2, "v": 1})


@pytest.fixture
def tridiagonal():
    return Matrix([[2, 1, 0, 0], [1, 2, 1, 0], [0, 1, 2, 1], [0, 0, 1, 2]])


_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and "criterion" in report.nodeid:
        if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
            _acceptance[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_acceptance.items()):
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")

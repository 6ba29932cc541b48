import pytest
from hypothesis import strategies as st

from exflow import FlowGraph

G1_DYN = [(0, 1), (1, 2), (1, 4), (2, 3), (3, 2), (4, 4)]
G1_ADJ = [(0, 1), (1, 2), (2, 3)]


@pytest.fixture
def g1():
    return FlowGraph.from_edges(5, G1_DYN, G1_ADJ)


@pytest.fixture
def path3():
    return FlowGraph.from_edges(3, [(0, 1), (1, 2), (2, 2)], [(0, 1), (1, 2)])


@pytest.fixture
def loops4():
    return FlowGraph.from_edges(4, [(v, v) for v in range(4)], [(0, 1), (1, 2), (2, 3)])


@st.composite
def small_graphs(draw, max_n=7):
    """(n, dyn, adj) with a total dynamics relation."""
    n = draw(st.integers(1, max_n))
    cell = st.integers(0, n - 1)
    dyn = []
    for v in range(n):
        succ = draw(st.sets(cell, min_size=1, max_size=min(n, 3)))
        dyn.extend((v, w) for w in sorted(succ))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    adj = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return n, dyn, adj


# acceptance lines, printed at the end of the session
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

import itertools

from hypothesis import strategies as st

from modkcolor.graph import Graph


@st.composite
def small_graphs(draw, max_n=9, max_edges=None):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=max_edges)) if pairs else []
    return Graph(n, edges)


def with_pendant(G: Graph, u: int, extra: int = 1) -> Graph:
    """Attach ``extra`` new leaves to ``u``."""
    edges = list(G.edges) + [(u, G.n + j) for j in range(extra)]
    return Graph(G.n + extra, edges)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import itertools

from hypothesis import HealthCheck, settings, strategies as st

from targetset.graph import Digraph

settings.register_profile("default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def digraphs(draw, max_nodes=8, min_nodes=1, bidirected=None):
    n = draw(st.integers(min_nodes, max_nodes))
    undirected = draw(st.booleans()) if bidirected is None else bidirected
    if undirected:
        pairs = list(itertools.combinations(range(n), 2))
        chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
        return Digraph.from_edges(n, chosen)
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Digraph.from_arcs(n, chosen)


@st.composite
def instances(draw, max_nodes=8, bidirected=None):
    """A graph with thresholds in [0, d_in + 1]."""
    g = draw(digraphs(max_nodes=max_nodes, bidirected=bidirected))
    t = [draw(st.integers(0, len(g.in_adj[v]) + 1)) for v in range(g.n)]
    return g, t


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)

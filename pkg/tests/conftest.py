from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

from surfsing.cycles import fundamental_cycle
from surfsing.graph_core import Z1, Arrow, PlumbingGraph, blow_up_edge, blow_up_point, intersection_matrix

DATA = Path(__file__).resolve().parent.parent / "data"

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")


@pytest.fixture
def data_dir() -> Path:
    return DATA


def z1_decorated(g: PlumbingGraph) -> PlumbingGraph:
    """Attach z1 arrows so that the fundamental cycle is the z1 vector."""
    z = fundamental_cycle(g).values
    mat = intersection_matrix(g)
    idx = {v: i for i, v in enumerate(mat.order)}
    arrows = []
    for v in g.ids:
        s = -sum(mat.entries[idx[v]][idx[w]] * z[w] for w in g.ids)
        if s:
            arrows.append(Arrow(Z1, v, s))
    return g.with_arrows(arrows)


@st.composite
def dominant_trees(draw, max_vertices: int = 9):
    """Trees with euler <= -max(valency, 2), hence negative definite."""
    n = draw(st.integers(1, max_vertices))
    parents = [draw(st.integers(1, v - 1)) for v in range(2, n + 1)]
    deg = {v: 0 for v in range(1, n + 1)}
    edges = []
    for v, p in zip(range(2, n + 1), parents):
        edges.append((p, v))
        deg[p] += 1
        deg[v] += 1
    verts = {}
    for v in range(1, n + 1):
        slack = draw(st.integers(0, 2))
        genus = draw(st.sampled_from([0, 0, 0, 1]))
        verts[v] = (-max(deg[v], 2) - slack, genus)
    return PlumbingGraph(verts, tuple(edges))


@st.composite
def blown_up_graphs(draw, max_vertices: int = 8, max_blowups: int = 4):
    """Dominant trees followed by random edge and point blow-ups."""
    g = draw(dominant_trees(max_vertices))
    for _ in range(draw(st.integers(0, max_blowups))):
        if g.edges and draw(st.booleans()):
            g = blow_up_edge(g, draw(st.sampled_from(g.edges)))
        else:
            g = blow_up_point(g, draw(st.sampled_from(g.ids)))
    return g


@st.composite
def decorated_graphs(draw, max_vertices: int = 8):
    return z1_decorated(draw(blown_up_graphs(max_vertices)))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, format_line
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for i in sorted(RESULTS):
            terminalreporter.write_line(format_line(i))

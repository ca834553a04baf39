from itertools import combinations

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from shiftramsey.graph import Graph

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def small_graphs(draw, min_vertices=0, max_vertices=8):
    n = draw(st.integers(min_vertices, max_vertices))
    pairs = list(combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, keep in zip(pairs, mask) if keep])


@pytest.fixture
def k5_pentagon():
    """K_5 with the 5-cycle red and the pentagram blue."""
    from shiftramsey.coloring import TwoColoring
    from shiftramsey.graph import complete_graph

    host = complete_graph(5)
    data = bytes(0 if (v - u) % 5 in (1, 4) else 1 for u, v in host.edge_list)
    return TwoColoring(host, data=data)

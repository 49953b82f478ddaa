import pytest

from igmatch.graphs import (
    Graph,
    Pattern,
    complete_graph,
    cycle_graph,
    path_graph,
    star_graph,
)


@pytest.fixture
def k1():
    return Pattern.of(complete_graph(1))


@pytest.fixture
def k2():
    return Pattern.of(complete_graph(2))


@pytest.fixture
def k3():
    return Pattern.of(complete_graph(3))


@pytest.fixture
def k4():
    return Pattern.of(complete_graph(4))


@pytest.fixture
def p3():
    return Pattern.of(path_graph(3))


@pytest.fixture
def p4():
    return Pattern.of(path_graph(4))


@pytest.fixture
def c5():
    return Pattern.of(cycle_graph(5))


@pytest.fixture
def claw():
    return star_graph(3)


@pytest.fixture
def barbell_bridge():
    """Claw-free 8-vertex host: triangle {0,1,2}, path 3-4-5, clique {6,7}.

    Bridges: 2-3 and 5-6.  Used as a hand fixture for strip structures.
    """
    return Graph(8, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6),
                     (6, 7)])

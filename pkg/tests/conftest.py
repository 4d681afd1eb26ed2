import pytest

from hgwl.core import build_hypergraph


@pytest.fixture
def h3():
    return build_hypergraph(3, [[0, 1], [0, 1, 2]])


@pytest.fixture
def g1():
    return build_hypergraph(3, [[0, 1, 2]])


@pytest.fixture
def g2():
    return build_hypergraph(3, [[0, 1], [1, 2]])

"""Shared fixtures: small named graphs and the connected-graph atlas corpus."""

import networkx as nx
import pytest

from chipfire.families import complete, crown, cycle, from_networkx, generalized_banana, path
from chipfire.graph import Multigraph


def atlas(max_n: int) -> list[Multigraph]:
    """Every connected graph on 1..max_n vertices (networkx atlas order)."""
    return [
        from_networkx(H)
        for H in nx.graph_atlas_g()
        if 0 < H.number_of_nodes() <= max_n and nx.is_connected(H)
    ]


@pytest.fixture(scope="session")
def corpus5() -> list[Multigraph]:
    return atlas(5)


@pytest.fixture(scope="session")
def corpus6() -> list[Multigraph]:
    return atlas(6)


@pytest.fixture(scope="session")
def corpus7() -> list[Multigraph]:
    return atlas(7)


@pytest.fixture
def c4() -> Multigraph:
    return cycle(4)


@pytest.fixture
def p2() -> Multigraph:
    return path(2)


@pytest.fixture
def k5() -> Multigraph:
    return complete(5)


@pytest.fixture(scope="session")
def crown10() -> Multigraph:
    return crown(10)


@pytest.fixture
def banana3() -> Multigraph:
    return generalized_banana(3, [6, 6])


@pytest.fixture
def write_graph(tmp_path):
    """Write a graph in the text format and return its path."""
    from chipfire.graph import dump_text

    def _write(G: Multigraph, name: str = "graph.txt"):
        target = tmp_path / name
        target.write_text(dump_text(G))
        return target

    return _write

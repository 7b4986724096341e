"""Deterministic generators for the graph families used throughout, plus the
bipartite extension construction.

Identical parameters always give identical vertex numbering.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import networkx as nx

from chipfire.errors import InvalidInputError, PreconditionError
from chipfire.graph import Multigraph, is_simple

logger = logging.getLogger(__name__)


def from_networkx(H: nx.Graph) -> Multigraph:
    """Convert a graph on nodes ``0..n-1``; a ``multiplicity`` edge attribute is honored."""
    n = H.number_of_nodes()
    if sorted(H.nodes) != list(range(n)):
        H = nx.convert_node_labels_to_integers(H, ordering="sorted")
    return Multigraph.from_edges(
        n, [(int(u), int(v), int(d.get("multiplicity", 1))) for u, v, d in H.edges(data=True)]
    )


def cycle(n: int) -> Multigraph:
    if n < 3:
        raise InvalidInputError(f"a cycle needs at least 3 vertices, got {n}")
    return from_networkx(nx.cycle_graph(n))


def path(n: int) -> Multigraph:
    if n < 2:
        raise InvalidInputError(f"a path needs at least 2 vertices, got {n}")
    return from_networkx(nx.path_graph(n))


def complete(n: int) -> Multigraph:
    if n < 1:
        raise InvalidInputError(f"a complete graph needs at least 1 vertex, got {n}")
    return from_networkx(nx.complete_graph(n))


def complete_bipartite(a: int, b: int) -> Multigraph:
    """``K_{a,b}`` with sides ``0..a-1`` and ``a..a+b-1``."""
    if a < 1 or b < 1:
        raise InvalidInputError(f"both sides need at least one vertex, got {a} and {b}")
    return from_networkx(nx.complete_bipartite_graph(a, b))


def crown(two_n: int) -> Multigraph:
    """``K_{n,n}`` minus the perfect matching ``i -- n+i``.

    Vertex ``i`` and ``n + i`` are the only pair at distance 3.
    """
    if two_n % 2 or two_n < 6:
        raise InvalidInputError(f"crown graphs need an even vertex count >= 6, got {two_n}")
    n = two_n // 2
    H = nx.complete_bipartite_graph(n, n)
    H.remove_edges_from((i, n + i) for i in range(n))
    return from_networkx(H)


def generalized_banana(n: int, mults: Sequence[int]) -> Multigraph:
    """Path ``v0 .. v_{n-1}`` with ``mults[i]`` parallel edges between ``v_i`` and ``v_{i+1}``."""
    if n < 2:
        raise InvalidInputError(f"a banana graph needs at least 2 vertices, got {n}")
    if len(mults) != n - 1:
        raise InvalidInputError(f"expected {n - 1} multiplicities, got {len(mults)}")
    if any(m < 1 for m in mults):
        raise InvalidInputError("multiplicities must be positive")
    return Multigraph.from_edges(n, [(i, i + 1, m) for i, m in enumerate(mults)])


# -------------------------------------------------------------------
#   Bipartitions and the bipartite extension
# -------------------------------------------------------------------


@dataclass(frozen=True)
class BipartitionLabels:
    """Side (1 or 2) of every vertex."""

    part: tuple[int, ...]

    def side(self, k: int) -> list[int]:
        return [v for v, p in enumerate(self.part) if p == k]

    def check(self, G: Multigraph) -> None:
        if len(self.part) != G.n:
            raise InvalidInputError(f"{len(self.part)} labels for {G.n} vertices")
        if any(p not in (1, 2) for p in self.part):
            raise InvalidInputError("labels must be 1 or 2")
        for u, v, _ in G.edges():
            if self.part[u] == self.part[v]:
                raise PreconditionError(f"edge ({u}, {v}) joins two vertices of side {self.part[u]}")


def detect_bipartition(G: Multigraph) -> BipartitionLabels:
    """A 2-coloring with vertex 0 on side 1."""
    try:
        color = nx.bipartite.color(G.simple_graph)
    except nx.NetworkXError as e:
        raise PreconditionError(f"graph is not bipartite: {e}") from e
    return BipartitionLabels(tuple(1 if color[v] == color[0] else 2 for v in G.vertices))


@dataclass(frozen=True)
class ExtensionRoles:
    """Which role every vertex of the extension plays and which vertex of G it copies."""

    role: tuple[str, ...]
    origin: tuple[int, ...]

    def members(self, *roles: str) -> list[int]:
        return [v for v, r in enumerate(self.role) if r in roles]

    def labels(self) -> BipartitionLabels:
        """Sides ``A1 ∪ B2`` (2) and ``A2 ∪ B1`` (1) of the extension."""
        return BipartitionLabels(tuple(1 if r in ("A2", "B1") else 2 for r in self.role))


def bipartite_extension(
    G: Multigraph, labels: BipartitionLabels | None = None
) -> tuple[Multigraph, ExtensionRoles]:
    """Bipartite extension of a simple bipartite graph.

    ``A1`` mirrors ``B2`` (attached to ``B1`` as ``B2`` is), ``A2`` mirrors
    ``B1`` (attached to ``B2`` as ``B1`` is), and ``A1`` and ``A2`` are fully
    joined. Numbering: ``B1`` then ``B2`` in original order, then ``A1``
    ordered as ``B2``, then ``A2`` ordered as ``B1``.
    """
    if not is_simple(G):
        raise PreconditionError("bipartite extension needs a simple graph")
    if labels is None:
        labels = detect_bipartition(G)
    labels.check(G)
    b1, b2 = labels.side(1), labels.side(2)
    if not b1 or not b2:
        raise PreconditionError("both sides of the bipartition must be nonempty")
    p, q = len(b1), len(b2)
    index = {v: i for i, v in enumerate(b1)} | {v: p + j for j, v in enumerate(b2)}

    def a1(w: int) -> int:
        return p + q + (index[w] - p)

    def a2(u: int) -> int:
        return p + 2 * q + index[u]

    edges = []
    for u, v, _ in G.edges():
        left, right = (u, v) if labels.part[u] == 1 else (v, u)
        edges.append((index[left], index[right]))
        edges.append((index[left], a1(right)))
        edges.append((a2(left), index[right]))
    edges.extend((a1(w), a2(u)) for w in b2 for u in b1)

    roles = ExtensionRoles(
        role=tuple(["B1"] * p + ["B2"] * q + ["A1"] * q + ["A2"] * p),
        origin=tuple(b1 + b2 + b2 + b1),
    )
    extended = Multigraph.from_edges(2 * (p + q), edges)
    logger.debug(f"Bipartite extension: {G.n} -> {extended.n} vertices")
    return extended, roles


def to_dot(G: Multigraph, name: str = "G") -> str:
    """Graphviz DOT text; parallel edges are drawn once with their multiplicity as label."""
    lines = [f"graph {name} {{"]
    lines.extend(f"  {v};" for v in G.vertices)
    for u, v, m in G.edges():
        lines.append(f"  {u} -- {v}" + (f' [label="{m}"];' if m > 1 else ";"))
    lines.append("}")
    return "\n".join(lines) + "\n"

"""Multigraph representation and the structural queries the engine needs.

Vertices are the integers ``0..n-1``. Edge multiplicities live in a dense
symmetric matrix; the graphs handled here stay small (a few dozen vertices),
so nothing sparser is needed.
"""

import hashlib
import logging
from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from pathlib import Path

import networkx as nx
import numpy as np

from chipfire.errors import GraphFormatError, InvalidInputError, PreconditionError

logger = logging.getLogger(__name__)

_SOURCE = "__source__"
_SINK = "__sink__"


class Unbounded(Enum):
    """Sentinel for quantities with no finite value (girth of a tree, egg-cut of one egg)."""

    INFINITE = "infinite"

    def __repr__(self) -> str:
        return "INFINITE"


INFINITE = Unbounded.INFINITE

ExtendedInt = int | Unbounded
Edge = tuple[int, int, int]


@dataclass(frozen=True, eq=False)
class Multigraph:
    """Loop-free connected undirected multigraph.

    ``mult[u][v]`` is the number of parallel edges between ``u`` and ``v``.
    """

    n: int
    mult: np.ndarray

    def __post_init__(self) -> None:
        mult = np.array(self.mult, dtype=np.int64, copy=True)
        if mult.shape != (self.n, self.n):
            raise InvalidInputError(
                f"multiplicity matrix has shape {mult.shape}, expected ({self.n}, {self.n})"
            )
        if self.n < 1:
            raise InvalidInputError("a graph needs at least one vertex")
        if (mult < 0).any():
            raise InvalidInputError("edge multiplicities must be non-negative")
        if (np.diag(mult) != 0).any():
            raise InvalidInputError("loops are not allowed")
        if not np.array_equal(mult, mult.T):
            raise InvalidInputError("multiplicity matrix must be symmetric")
        mult.setflags(write=False)
        object.__setattr__(self, "mult", mult)
        if not nx.is_connected(self.simple_graph):
            raise InvalidInputError("graph is not connected")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int] | Edge]) -> "Multigraph":
        """Build a graph from ``(u, v)`` or ``(u, v, m)`` tuples; repeated pairs add up."""
        mult = np.zeros((n, n), dtype=np.int64)
        for edge in edges:
            u, v = edge[0], edge[1]
            m = edge[2] if len(edge) > 2 else 1
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidInputError(f"edge ({u}, {v}) has a vertex out of range")
            if u == v:
                raise InvalidInputError(f"loop at vertex {u}")
            mult[u, v] += m
            mult[v, u] += m
        return cls(n, mult)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Multigraph):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.mult, other.mult))

    def __hash__(self) -> int:
        return hash((self.n, self.mult.tobytes()))

    def __repr__(self) -> str:
        return f"Multigraph(n={self.n}, edges={edge_count(self)})"

    @property
    def vertices(self) -> range:
        return range(self.n)

    @cached_property
    def neighbors(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex, the ``(neighbor, multiplicity)`` pairs in ascending order."""
        return tuple(
            tuple((int(u), int(self.mult[v, u])) for u in np.flatnonzero(self.mult[v]))
            for v in range(self.n)
        )

    @cached_property
    def valences(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self.mult.sum(axis=1))

    @cached_property
    def simple_graph(self) -> nx.Graph:
        """Underlying simple graph, multiplicity kept as the ``capacity`` attribute."""
        return to_networkx(self)

    def edges(self) -> list[Edge]:
        """Distinct vertex pairs ``(u, v, m)`` with ``u < v``, in lexicographic order."""
        us, vs = np.nonzero(np.triu(self.mult))
        return [(int(u), int(v), int(self.mult[u, v])) for u, v in zip(us, vs)]


def to_networkx(G: Multigraph) -> nx.Graph:
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    us, vs = np.nonzero(np.triu(G.mult))
    for u, v in zip(us, vs):
        m = int(G.mult[u, v])
        H.add_edge(int(u), int(v), capacity=m, multiplicity=m)
    return H


def _check_vertex(G: Multigraph, v: int) -> None:
    if not 0 <= v < G.n:
        raise InvalidInputError(f"vertex {v} out of range for a graph on {G.n} vertices")


def _vertex_set(G: Multigraph, vertices: Iterable[int]) -> frozenset[int]:
    vs = frozenset(int(v) for v in vertices)
    for v in vs:
        _check_vertex(G, v)
    return vs


def edge_count(G: Multigraph) -> int:
    """Number of edges counted with multiplicity."""
    return int(G.mult.sum()) // 2


def is_simple(G: Multigraph) -> bool:
    return bool((G.mult <= 1).all())


def valence(G: Multigraph, v: int) -> int:
    _check_vertex(G, v)
    return G.valences[v]


def min_valence(G: Multigraph) -> int:
    return min(G.valences)


def girth(G: Multigraph) -> ExtendedInt:
    """Shortest cycle length; a parallel pair is a 2-cycle, trees have INFINITE girth."""
    if (G.mult >= 2).any():
        return 2
    g = nx.girth(G.simple_graph)
    if g == float("inf"):
        return INFINITE
    return int(g)


def distances(G: Multigraph) -> np.ndarray:
    """Hop-distance matrix; multiplicities are ignored."""
    dist = np.zeros((G.n, G.n), dtype=np.int64)
    for source, lengths in nx.all_pairs_shortest_path_length(G.simple_graph):
        for target, d in lengths.items():
            dist[source, target] = d
    return dist


def laplacian(G: Multigraph) -> np.ndarray:
    """Integer Laplacian ``diag(valence) - mult``."""
    return np.diag(G.mult.sum(axis=1)) - G.mult


def outdeg(G: Multigraph, U: Iterable[int], v: int) -> int:
    """Edges from ``v`` to the complement of ``U`` (the chips ``v`` loses when ``U`` fires)."""
    members = _vertex_set(G, U)
    if v not in members:
        raise InvalidInputError(f"vertex {v} is not in the fired set")
    return sum(m for u, m in G.neighbors[v] if u not in members)


@dataclass(frozen=True)
class Cut:
    """A minimum edge cut: its size, the cut edges and the side holding the first set."""

    value: int
    edges: tuple[Edge, ...]
    side: tuple[int, ...]


def _cut_in(H: nx.Graph, A: frozenset[int], B: frozenset[int]) -> Cut:
    # Both sides are contracted onto a terminal through uncapacitated (infinite) edges.
    flow = H.copy()
    for a in A:
        flow.add_edge(_SOURCE, a)
    for b in B:
        flow.add_edge(b, _SINK)
    value, (reachable, _) = nx.minimum_cut(flow, _SOURCE, _SINK, capacity="capacity")
    side = sorted(v for v in reachable if v != _SOURCE)
    inside = set(side)
    edges = sorted(
        (min(u, v), max(u, v), int(data["capacity"]))
        for u, v, data in H.edges(data=True)
        if (u in inside) != (v in inside)
    )
    return Cut(value=int(value), edges=tuple(edges), side=tuple(side))


def minimum_cut(G: Multigraph, A: Iterable[int], B: Iterable[int]) -> Cut:
    """Minimum cut separating every vertex of ``A`` from every vertex of ``B``."""
    sa, sb = _vertex_set(G, A), _vertex_set(G, B)
    if not sa or not sb:
        raise PreconditionError("both vertex sets must be nonempty")
    if sa & sb:
        raise PreconditionError(f"vertex sets overlap on {sorted(sa & sb)}")
    return _cut_in(G.simple_graph, sa, sb)


def min_cut_between(G: Multigraph, A: Iterable[int], B: Iterable[int]) -> int:
    return minimum_cut(G, A, B).value


def induced(G: Multigraph, A: Iterable[int]) -> nx.Graph:
    """Induced subgraph ``G[A]`` as a networkx graph (it need not be connected)."""
    return G.simple_graph.subgraph(_vertex_set(G, A)).copy()


def _edge_connectivity_of(H: nx.Graph) -> int:
    nodes = sorted(H.nodes)
    if len(nodes) == 1:
        raise ValueError("edge connectivity of a single vertex is unbounded")
    if not nx.is_connected(H):
        return 0
    v = nodes[0]
    return min(_cut_in(H, frozenset([v]), frozenset([u])).value for u in nodes[1:])


def edge_connectivity(G: Multigraph) -> ExtendedInt:
    """Global edge connectivity λ(G), counting multiplicities."""
    if G.n == 1:
        return INFINITE
    return _edge_connectivity_of(G.simple_graph)


def is_k_edge_connected(G: Multigraph, A: Iterable[int], k: int) -> bool:
    """True iff ``G[A]`` is a single vertex or stays connected after deleting any k-1 edges."""
    members = _vertex_set(G, A)
    if not members:
        raise InvalidInputError("vertex set is empty")
    if len(members) == 1:
        return True
    return _edge_connectivity_of(induced(G, members)) >= k


# -------------------------------------------------------------------
#   Text format
# -------------------------------------------------------------------


def parse_text(text: str) -> Multigraph:
    """Parse the ``n <count>`` / ``u v m`` graph format."""
    n: int | None = None
    pairs: dict[tuple[int, int], tuple[int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 2 or fields[0] != "n":
                raise GraphFormatError("expected header 'n <count>'", lineno)
            try:
                n = int(fields[1])
            except ValueError:
                raise GraphFormatError(f"vertex count is not an integer: {fields[1]!r}", lineno)
            if n < 1:
                raise GraphFormatError("vertex count must be positive", lineno)
            continue
        if len(fields) != 3:
            raise GraphFormatError("expected 'u v m'", lineno)
        try:
            u, v, m = (int(x) for x in fields)
        except ValueError:
            raise GraphFormatError(f"non-integer field in {line!r}", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"vertex out of range in {line!r}", lineno)
        if u == v:
            raise GraphFormatError(f"loop at vertex {u}", lineno)
        if m < 1:
            raise GraphFormatError(f"multiplicity must be at least 1, got {m}", lineno)
        key = (min(u, v), max(u, v))
        if key in pairs:
            earlier_m, earlier_line = pairs[key]
            if earlier_m != m:
                raise GraphFormatError(
                    f"asymmetric duplicate pair {key}: multiplicity {m} here, "
                    f"{earlier_m} on line {earlier_line}",
                    lineno,
                )
            # the same edge listed from both ends
            continue
        pairs[key] = (m, lineno)
    if n is None:
        raise GraphFormatError("missing header 'n <count>'")
    try:
        return Multigraph.from_edges(n, [(u, v, m) for (u, v), (m, _) in sorted(pairs.items())])
    except GraphFormatError:
        raise
    except InvalidInputError as e:
        raise GraphFormatError(str(e)) from e


def load_text(path: str | Path) -> Multigraph:
    text = Path(path).read_text()
    logger.debug(f"Loaded graph text from {path} ({len(text)} bytes)")
    return parse_text(text)


def dump_text(G: Multigraph, comment: str | None = None) -> str:
    """Canonical text form: header, then one line per pair in lexicographic order."""
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"n {G.n}")
    lines.extend(f"{u} {v} {m}" for u, v, m in G.edges())
    return "\n".join(lines) + "\n"


def content_hash(G: Multigraph) -> str:
    return hashlib.sha256(dump_text(G).encode()).hexdigest()

"""Exact higher gonality by exhaustive search, r-independence numbers and the
independence upper bound.

Search correctness rests on monotonicity: adding a chip never lowers rank.
So if no divisor of degree ``d`` has rank at least ``r``, none of smaller
degree does either (add chips until the degree is ``d``), and exhausting a
single degree level proves a lower bound. Within multiplicity-free divisors
the same holds by adding a chip to an unchipped vertex.

Candidates at one degree level are cut into chunks in lexicographic order.
Chunks may be evaluated by worker processes, but results are consumed in
chunk order, so the reported witness is always the lexicographically first
one regardless of scheduling.
"""

import logging
import time
from collections import deque
from collections.abc import Iterator
from concurrent.futures import Future, ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import islice
from math import comb

import networkx as nx

from chipfire.divisors import (
    Divisor,
    count_effective,
    effective_divisors,
    multiplicity_free_divisors,
    rank_at_least,
    scale,
)
from chipfire.errors import InfeasibleError, PreconditionError
from chipfire.graph import INFINITE, Multigraph, distances, girth, min_valence

logger = logging.getLogger(__name__)

# Deadline checks inside a chunk happen every this many candidates
_CLOCK_STRIDE = 32


@dataclass(frozen=True)
class IndependenceReport:
    r: int
    alpha: int
    witness: tuple[int, ...]


@dataclass
class SearchReport:
    """Outcome of an exact gonality search.

    ``minimum_degree`` and ``witness`` are None when the budget ran out.
    ``degrees_exhausted`` lists the ``(degree, candidates)`` level whose
    exhaustion proves nothing smaller works.
    """

    r: int
    minimum_degree: int | None
    witness: Divisor | None
    degrees_exhausted: list[tuple[int, int]] = field(default_factory=list)
    elapsed: float = 0.0
    budget_exceeded: bool = False
    multiplicity_free: bool = False
    strategy: str = "ascending"
    assumed_lower_bound: int | None = None


# -------------------------------------------------------------------
#   Independence numbers
# -------------------------------------------------------------------


def _far_graph(G: Multigraph, r: int) -> nx.Graph:
    """Vertices joined when they are more than ``r`` apart."""
    dist = distances(G)
    far = nx.Graph()
    far.add_nodes_from(G.vertices)
    far.add_edges_from(
        (u, v) for u in G.vertices for v in range(u + 1, G.n) if dist[u, v] > r
    )
    return far


def _first_clique(far: nx.Graph, size: int) -> tuple[int, ...] | None:
    """Lexicographically first clique of ``size`` vertices."""

    def extend(chosen: list[int], candidates: list[int]) -> list[int] | None:
        if len(chosen) == size:
            return chosen
        for i, v in enumerate(candidates):
            if len(chosen) + len(candidates) - i < size:
                return None
            found = extend(chosen + [v], [u for u in candidates[i + 1 :] if far.has_edge(v, u)])
            if found is not None:
                return found
        return None

    found = extend([], sorted(far.nodes))
    return tuple(found) if found is not None else None


def alpha_r(G: Multigraph, r: int) -> IndependenceReport:
    """Largest vertex set with pairwise distance greater than ``r``.

    The size comes from an exact maximum clique of the "far apart" graph;
    the witness is the lexicographically smallest set of that size.
    """
    if r < 1:
        raise PreconditionError(f"r must be at least 1, got {r}")
    far = _far_graph(G, r)
    _, alpha = nx.max_weight_clique(far, weight=None)
    witness = _first_clique(far, alpha)
    assert witness is not None
    return IndependenceReport(r=r, alpha=int(alpha), witness=witness)


# -------------------------------------------------------------------
#   Independence upper bound
# -------------------------------------------------------------------


def theorem12_preconditions(G: Multigraph, r: int) -> bool:
    """``δ(G) >= r`` and ``girth(G) > r + 1``."""
    if r < 1:
        raise PreconditionError(f"r must be at least 1, got {r}")
    g = girth(G)
    return min_valence(G) >= r and (g is INFINITE or g > r + 1)


def _require_preconditions(G: Multigraph, r: int) -> None:
    if not theorem12_preconditions(G, r):
        raise PreconditionError(
            f"independence bound needs min valence >= {r} and girth > {r + 1}; "
            f"got min valence {min_valence(G)} and girth {girth(G)!r}"
        )


def theorem12_divisor(G: Multigraph, r: int) -> Divisor:
    """One chip on every vertex outside a maximum r-independent set."""
    _require_preconditions(G, r)
    independent = set(alpha_r(G, r).witness)
    D = Divisor(tuple(0 if v in independent else 1 for v in G.vertices))
    if not rank_at_least(G, D, r):
        raise RuntimeError(f"independence divisor {D} failed the rank {r} check")
    return D


def upper_bound(G: Multigraph, r: int) -> int:
    """``n - α_r(G)``."""
    _require_preconditions(G, r)
    return G.n - alpha_r(G, r).alpha


# -------------------------------------------------------------------
#   Exhaustive search
# -------------------------------------------------------------------

_worker_graph: Multigraph | None = None
_worker_rank: int = 0
_worker_deadline: float | None = None


def _init_worker(G: Multigraph, r: int, deadline: float | None) -> None:
    global _worker_graph, _worker_rank, _worker_deadline
    _worker_graph, _worker_rank, _worker_deadline = G, r, deadline


def _scan_chunk(
    G: Multigraph, r: int, chunk: list[tuple[int, ...]], deadline: float | None
) -> tuple[tuple[int, ...] | None, int, bool]:
    """First chip vector in ``chunk`` of rank >= r; also how many were checked and whether time ran out."""
    for i, chips in enumerate(chunk):
        if deadline is not None and i % _CLOCK_STRIDE == 0 and time.time() > deadline:
            return None, i, True
        if rank_at_least(G, Divisor(chips), r):
            return chips, i + 1, False
    return None, len(chunk), False


def _scan_chunk_in_worker(chunk: list[tuple[int, ...]]) -> tuple[tuple[int, ...] | None, int, bool]:
    assert _worker_graph is not None
    return _scan_chunk(_worker_graph, _worker_rank, chunk, _worker_deadline)


def _chunks(candidates: Iterator[tuple[int, ...]], size: int) -> Iterator[list[tuple[int, ...]]]:
    while chunk := list(islice(candidates, size)):
        yield chunk


@dataclass
class _Level:
    witness: Divisor | None
    checked: int
    timed_out: bool


class _Scanner:
    """Scans one degree level at a time, in-process or across a worker pool."""

    def __init__(
        self,
        G: Multigraph,
        r: int,
        multiplicity_free: bool,
        deadline: float | None,
        threads: int,
        chunk_size: int,
    ):
        self.G = G
        self.r = r
        self.multiplicity_free = multiplicity_free
        self.deadline = deadline
        self.chunk_size = chunk_size
        self.pool: ProcessPoolExecutor | None = None
        if threads > 1:
            self.pool = ProcessPoolExecutor(
                max_workers=threads, initializer=_init_worker, initargs=(G, r, deadline)
            )
        self.window = max(2 * threads, 1)

    def close(self) -> None:
        if self.pool is not None:
            self.pool.shutdown(wait=True, cancel_futures=True)

    def level_size(self, d: int) -> int:
        if self.multiplicity_free:
            return comb(self.G.n, d)
        return count_effective(self.G.n, d)

    def _candidates(self, d: int) -> Iterator[tuple[int, ...]]:
        if self.multiplicity_free:
            return multiplicity_free_divisors(self.G.n, d)
        return effective_divisors(self.G.n, d)

    def scan(self, d: int) -> _Level:
        started = time.monotonic()
        chunks = _chunks(self._candidates(d), self.chunk_size)
        checked = 0
        if self.pool is None:
            for chunk in chunks:
                chips, seen, timed_out = _scan_chunk(self.G, self.r, chunk, self.deadline)
                checked += seen
                if chips is not None or timed_out:
                    return _Level(Divisor(chips) if chips is not None else None, checked, timed_out)
        else:
            pending: deque[Future] = deque(
                self.pool.submit(_scan_chunk_in_worker, c) for c in islice(chunks, self.window)
            )
            while pending:
                chips, seen, timed_out = pending.popleft().result()
                checked += seen
                if chips is not None or timed_out:
                    for fut in pending:
                        fut.cancel()
                    return _Level(Divisor(chips) if chips is not None else None, checked, timed_out)
                nxt = next(chunks, None)
                if nxt is not None:
                    pending.append(self.pool.submit(_scan_chunk_in_worker, nxt))
        logger.debug(f"Degree {d}: {checked} candidates exhausted in {time.monotonic() - started:.2f}s")
        return _Level(None, checked, False)


def _search(
    G: Multigraph,
    r: int,
    multiplicity_free: bool,
    budget: float | None,
    threads: int,
    strategy: str,
    start_degree: int | None,
    upper: int | None,
    chunk_size: int,
) -> SearchReport:
    if r < 1:
        raise PreconditionError(f"r must be at least 1, got {r}")
    if threads < 1:
        raise PreconditionError(f"thread count must be at least 1, got {threads}")
    started = time.monotonic()
    deadline = time.time() + budget if budget is not None else None
    ceiling = G.n if multiplicity_free else r * G.n
    label = "mfgon" if multiplicity_free else "gon"

    report = SearchReport(
        r=r,
        minimum_degree=None,
        witness=None,
        multiplicity_free=multiplicity_free,
        strategy=strategy,
    )

    if strategy == "descending" and upper is None:
        if theorem12_preconditions(G, r):
            upper = upper_bound(G, r)
        else:
            # r chips on every vertex survive any degree-r debt
            upper = ceiling
            logger.info(f"Independence bound unavailable for {label}_{r}; descending from {ceiling}")

    scanner = _Scanner(G, r, multiplicity_free, deadline, threads, chunk_size)
    try:
        if strategy == "descending":
            assert upper is not None
            d = min(upper, ceiling)
            best = scanner.scan(d)
            if best.timed_out:
                report.budget_exceeded = True
            elif best.witness is None:
                # The supplied bound was wrong; continue upward past it.
                report.degrees_exhausted = [(d, best.checked)]
                _ascend(scanner, report, d + 1, ceiling, label)
            else:
                while d - 1 >= r:
                    logger.info(f"{label}_{r}: witness at degree {d}, checking degree {d - 1}")
                    lower = scanner.scan(d - 1)
                    if lower.timed_out:
                        report.budget_exceeded = True
                        break
                    if lower.witness is None:
                        report.degrees_exhausted = [(d - 1, lower.checked)]
                        break
                    d, best = d - 1, lower
                if not report.budget_exceeded:
                    report.minimum_degree, report.witness = d, best.witness
        else:
            start = max(r, start_degree or r)
            if start > r:
                report.assumed_lower_bound = start
            _ascend(scanner, report, start, ceiling, label)
    finally:
        scanner.close()

    report.elapsed = time.monotonic() - started
    if report.budget_exceeded:
        report.minimum_degree = report.witness = None
        logger.warning(f"{label}_{r}: budget of {budget}s exceeded after {report.elapsed:.1f}s")
    else:
        logger.info(
            f"{label}_{r} = {report.minimum_degree} "
            f"(witness {report.witness}, {report.elapsed:.2f}s)"
        )
    return report


def _ascend(scanner: _Scanner, report: SearchReport, start: int, ceiling: int, label: str) -> None:
    for d in range(start, ceiling + 1):
        level = scanner.scan(d)
        if level.timed_out:
            report.budget_exceeded = True
            return
        if level.witness is not None:
            report.minimum_degree, report.witness = d, level.witness
            return
        logger.info(f"{label}_{report.r}: degree {d} exhausted ({level.checked} candidates)")
        report.degrees_exhausted = [(d, level.checked)]
    raise InfeasibleError(
        f"infeasible at n: no {'multiplicity-free ' if report.multiplicity_free else ''}"
        f"divisor of degree <= {ceiling} has rank {report.r}"
    )


def gonality(
    G: Multigraph,
    r: int,
    budget: float | None = None,
    *,
    threads: int = 1,
    strategy: str = "ascending",
    start_degree: int | None = None,
    upper: int | None = None,
    chunk_size: int = 512,
) -> SearchReport:
    """Exact ``gon_r(G)``: the minimum degree of an effective divisor of rank at least ``r``."""
    return _search(G, r, False, budget, threads, strategy, start_degree, upper, chunk_size)


def mf_gonality(
    G: Multigraph,
    r: int,
    budget: float | None = None,
    *,
    threads: int = 1,
    strategy: str = "ascending",
    start_degree: int | None = None,
    upper: int | None = None,
    chunk_size: int = 512,
) -> SearchReport:
    """Exact multiplicity-free gonality: the search restricted to 0/1 divisors."""
    return _search(G, r, True, budget, threads, strategy, start_degree, upper, chunk_size)


def scaled_witness(G: Multigraph, report: SearchReport, k: int) -> Divisor:
    """``k`` times the report's witness; its rank is at least ``k * r``, so gon_{kr} <= k * gon_r."""
    if report.witness is None:
        raise PreconditionError("search report has no witness")
    D = scale(report.witness, k)
    if not rank_at_least(G, D, k * report.r):
        raise RuntimeError(f"{k} x {report.witness} does not reach rank {k * report.r}")
    return D

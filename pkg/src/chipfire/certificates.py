"""Scramble and bramble certificates: verification, r-hitting numbers,
egg-cut numbers and the orders that lower-bound higher gonality.

Certificates are inputs. Nothing here searches for a best scramble.
"""

import json
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from chipfire.errors import InvalidInputError, PreconditionError
from chipfire.graph import INFINITE, Edge, ExtendedInt, Multigraph, is_k_edge_connected, minimum_cut

logger = logging.getLogger(__name__)

VertexSet = tuple[int, ...]


def _normalize(sets: Iterable[Iterable[int]], what: str) -> tuple[VertexSet, ...]:
    normalized = []
    for i, s in enumerate(sets):
        members = [int(v) for v in s]
        if not members:
            raise InvalidInputError(f"{what} {i} is empty")
        if len(set(members)) != len(members):
            raise InvalidInputError(f"{what} {i} repeats a vertex")
        normalized.append(tuple(sorted(members)))
    if not normalized:
        raise InvalidInputError(f"a certificate needs at least one {what}")
    return tuple(normalized)


@dataclass(frozen=True)
class ScrambleCertificate:
    """Eggs ``E_1..E_k``; each must induce an r-edge-connected subgraph."""

    eggs: tuple[VertexSet, ...]
    r: int

    def __post_init__(self) -> None:
        if self.r < 1:
            raise InvalidInputError(f"r must be positive, got {self.r}")
        object.__setattr__(self, "eggs", _normalize(self.eggs, "egg"))

    @property
    def sets(self) -> tuple[VertexSet, ...]:
        return self.eggs


@dataclass(frozen=True)
class BrambleCertificate:
    """Sets that are r-edge-connected and pairwise r-touching."""

    sets: tuple[VertexSet, ...]
    r: int

    def __post_init__(self) -> None:
        if self.r < 1:
            raise InvalidInputError(f"r must be positive, got {self.r}")
        object.__setattr__(self, "sets", _normalize(self.sets, "set"))

    def as_scramble(self) -> ScrambleCertificate:
        return ScrambleCertificate(self.sets, self.r)


Certificate = ScrambleCertificate | BrambleCertificate


@dataclass(frozen=True)
class Violation:
    """First reason a certificate fails; ``other`` is the second set of a failing pair."""

    index: int
    reason: str
    other: int | None = None

    def __str__(self) -> str:
        if self.other is None:
            return f"set {self.index}: {self.reason}"
        return f"sets {self.index} and {self.other}: {self.reason}"


@dataclass(frozen=True)
class Verification:
    valid: bool
    violation: Violation | None = None


@dataclass(frozen=True)
class HittingSet:
    size: int
    witness: tuple[int, ...]


@dataclass(frozen=True)
class EggCut:
    """Smallest egg-cut; ``pair`` names the two disjoint eggs it separates."""

    size: ExtendedInt
    pair: tuple[int, int] | None = None
    edges: tuple[Edge, ...] = ()
    side: tuple[int, ...] = ()


@dataclass(frozen=True)
class OrderReport:
    r: int
    hitting: HittingSet
    egg_cut: EggCut
    order: int


# -------------------------------------------------------------------
#   Certificate file format
# -------------------------------------------------------------------


class CertificateFile(BaseModel):
    kind: Literal["scramble", "bramble"]
    r: int = Field(ge=1)
    sets: list[list[int]] = Field(min_length=1)


def parse_certificate(text: str) -> Certificate:
    """Parse ``{"kind": ..., "r": ..., "sets": [[...], ...]}``."""
    try:
        raw = CertificateFile.model_validate(json.loads(text))
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"certificate is not valid JSON: {e}") from e
    except ValidationError as e:
        raise InvalidInputError(f"malformed certificate: {e.errors()[0]['msg']}") from e
    if raw.kind == "scramble":
        return ScrambleCertificate(tuple(tuple(s) for s in raw.sets), raw.r)
    return BrambleCertificate(tuple(tuple(s) for s in raw.sets), raw.r)


def load_certificate(path: str | Path) -> Certificate:
    return parse_certificate(Path(path).read_text())


def dump_certificate(cert: Certificate) -> str:
    kind = "scramble" if isinstance(cert, ScrambleCertificate) else "bramble"
    body = CertificateFile(kind=kind, r=cert.r, sets=[list(s) for s in cert.sets])
    return body.model_dump_json(indent=2) + "\n"


# -------------------------------------------------------------------
#   Verification
# -------------------------------------------------------------------


def _check_range(G: Multigraph, sets: Sequence[VertexSet]) -> None:
    for i, s in enumerate(sets):
        bad = [v for v in s if not 0 <= v < G.n]
        if bad:
            raise InvalidInputError(f"set {i} has vertices out of range: {bad}")


def _first_disconnected(G: Multigraph, sets: Sequence[VertexSet], r: int) -> Violation | None:
    for i, s in enumerate(sets):
        if not is_k_edge_connected(G, s, r):
            return Violation(i, f"induced subgraph is not {r}-edge-connected")
    return None


def edges_between(G: Multigraph, A: Sequence[int], B: Sequence[int]) -> int:
    """Edges with one end in ``A`` and the other in ``B``, for disjoint ``A`` and ``B``."""
    return int(G.mult[np.ix_(list(A), list(B))].sum())


def r_touch(G: Multigraph, A: Sequence[int], B: Sequence[int], r: int) -> bool:
    return bool(set(A) & set(B)) or edges_between(G, A, B) >= r


def verify_scramble(G: Multigraph, cert: ScrambleCertificate) -> Verification:
    _check_range(G, cert.eggs)
    violation = _first_disconnected(G, cert.eggs, cert.r)
    if violation is not None:
        logger.warning(f"Scramble rejected: {violation}")
    return Verification(violation is None, violation)


def verify_bramble(G: Multigraph, cert: BrambleCertificate) -> Verification:
    _check_range(G, cert.sets)
    violation = _first_disconnected(G, cert.sets, cert.r)
    if violation is None:
        for i, A in enumerate(cert.sets):
            for j in range(i + 1, len(cert.sets)):
                if not r_touch(G, A, cert.sets[j], cert.r):
                    violation = Violation(i, f"do not {cert.r}-touch", j)
                    break
            if violation is not None:
                break
    if violation is not None:
        logger.warning(f"Bramble rejected: {violation}")
    return Verification(violation is None, violation)


def _require_valid(G: Multigraph, cert: Certificate) -> None:
    if isinstance(cert, BrambleCertificate):
        result = verify_bramble(G, cert)
    else:
        result = verify_scramble(G, cert)
    if not result.valid:
        raise InvalidInputError(f"invalid certificate: {result.violation}")


# -------------------------------------------------------------------
#   r-hitting number
# -------------------------------------------------------------------


def r_hits(C: Sequence[int], sets: Sequence[VertexSet], r: int) -> bool:
    """Whether the multiset ``C`` meets every set at least ``r`` times."""
    counts = np.bincount(np.asarray(C, dtype=np.int64), minlength=1 + max(max(s) for s in sets))
    return all(int(counts[list(s)].sum()) >= r for s in sets)


def _disjoint_packing(sets: Sequence[VertexSet]) -> int:
    used: set[int] = set()
    packed = 0
    for s in sorted(sets, key=len):
        if used.isdisjoint(s):
            used.update(s)
            packed += 1
    return packed


class _HittingSearch:
    """Depth-first search over sorted multisets of a fixed size.

    Vertices are chosen in non-decreasing order, so the first multiset found
    is the lexicographically smallest of that size. A chosen vertex must lie
    in a set still short of ``r``; a minimum hitting multiset never holds a
    vertex that only adds to sets already hit.
    """

    def __init__(self, n: int, sets: Sequence[VertexSet], r: int):
        self.sets = sets
        self.r = r
        self.containing = [[i for i, s in enumerate(sets) if v in s] for v in range(n)]
        self.top = [s[-1] for s in sets]
        self.n = n

    def _bound(self, need: list[int], start: int) -> int:
        """Chips still required: needs of pairwise disjoint open sets, counted on vertices >= start."""
        used: set[int] = set()
        total = 0
        for i in sorted(range(len(need)), key=lambda i: -need[i]):
            if need[i] <= 0:
                continue
            usable = [v for v in self.sets[i] if v >= start]
            if used.isdisjoint(usable):
                used.update(usable)
                total += need[i]
        return total

    def run(self, k: int) -> list[int] | None:
        need = [self.r] * len(self.sets)
        chosen: list[int] = []

        def extend(start: int, remaining: int) -> bool:
            open_sets = [i for i, x in enumerate(need) if x > 0]
            if not open_sets:
                return True
            if remaining == 0:
                return False
            # A set whose vertices all lie below start can no longer be hit.
            if min(self.top[i] for i in open_sets) < start:
                return False
            if self._bound(need, start) > remaining:
                return False
            for v in range(start, self.n):
                if any(self.top[i] < v for i in open_sets):
                    return False
                hit = [i for i in self.containing[v] if need[i] > 0]
                if not hit:
                    continue
                for i in self.containing[v]:
                    need[i] -= 1
                chosen.append(v)
                if extend(v, remaining - 1):
                    return True
                chosen.pop()
                for i in self.containing[v]:
                    need[i] += 1
            return False

        return chosen if extend(0, k) else None


def _hitting(G: Multigraph, sets: Sequence[VertexSet], r: int) -> HittingSet:
    search = _HittingSearch(G.n, sets, r)
    k = r * _disjoint_packing(sets)
    while True:
        found = search.run(k)
        if found is not None:
            break
        k += 1
    witness = tuple(found)
    if not r_hits(witness, sets, r):
        raise RuntimeError(f"hitting multiset {witness} misses a set")
    logger.debug(f"h_{r} = {k} with witness {witness}")
    return HittingSet(size=k, witness=witness)


def hitting_number_r(G: Multigraph, cert: Certificate) -> HittingSet:
    """Exact minimum size of a multiset meeting every set at least ``r`` times."""
    _require_valid(G, cert)
    return _hitting(G, cert.sets, cert.r)


# -------------------------------------------------------------------
#   Egg-cuts and orders
# -------------------------------------------------------------------


def _egg_cut(G: Multigraph, eggs: Sequence[VertexSet]) -> EggCut:
    # Eggs are connected, so a minimum cut between two disjoint eggs leaves each whole.
    best = EggCut(size=INFINITE)
    for i, A in enumerate(eggs):
        for j in range(i + 1, len(eggs)):
            B = eggs[j]
            if set(A) & set(B):
                continue
            cut = minimum_cut(G, A, B)
            if best.size is INFINITE or cut.value < best.size:
                best = EggCut(size=cut.value, pair=(i, j), edges=cut.edges, side=cut.side)
    return best


def egg_cut_number(G: Multigraph, cert: ScrambleCertificate) -> EggCut:
    """Smallest edge set whose removal leaves two eggs in different components."""
    _require_valid(G, cert)
    return _egg_cut(G, cert.eggs)


def _order(G: Multigraph, cert: ScrambleCertificate) -> OrderReport:
    hitting = _hitting(G, cert.eggs, cert.r)
    cut = _egg_cut(G, cert.eggs)
    order = hitting.size if cut.size is INFINITE else min(hitting.size, cut.size)
    return OrderReport(r=cert.r, hitting=hitting, egg_cut=cut, order=order)


def scramble_order(G: Multigraph, cert: ScrambleCertificate) -> OrderReport:
    _require_valid(G, cert)
    return _order(G, cert)


def certify_lower_bound(G: Multigraph, cert: ScrambleCertificate) -> int:
    """Order of a valid r-scramble, a lower bound on ``gon_r(G)``."""
    return scramble_order(G, cert).order


def bramble_order_r(G: Multigraph, cert: BrambleCertificate) -> int:
    return hitting_number_r(G, cert).size


def treewidth_r_lower_bound(G: Multigraph, cert: BrambleCertificate) -> int:
    return bramble_order_r(G, cert) - cert.r


def vertex_scramble(G: Multigraph, r: int) -> ScrambleCertificate:
    return ScrambleCertificate(tuple((v,) for v in G.vertices), r)


# -------------------------------------------------------------------
#   Hitting multiset from a cut
# -------------------------------------------------------------------


@dataclass(frozen=True)
class ShoreHittingSet:
    """Multiset built from the cut ``E(U, V - U)``; its size is the cut size plus ``r``."""

    witness: tuple[int, ...]
    cut_size: int
    anchor: int
    hits_all: bool

    @property
    def size(self) -> int:
        return len(self.witness)


def shore_hitting_set(G: Multigraph, cert: BrambleCertificate, U: Iterable[int]) -> ShoreHittingSet:
    """r-hitting multiset for a bramble from a vertex set ``U`` that contains one
    bramble set and avoids another.

    Takes r vertices of ``B' ∩ X``, where ``B' ⊆ U`` has ``B' ∩ X``
    inclusion-minimal and ``X`` is the cut's shore inside ``U``, then one
    endpoint of every cut edge: the ``U`` end unless it lies in ``B'``.
    """
    _require_valid(G, cert)
    inside = frozenset(int(v) for v in U)
    if any(not 0 <= v < G.n for v in inside):
        raise InvalidInputError("U has vertices out of range")
    within = [i for i, s in enumerate(cert.sets) if inside.issuperset(s)]
    if not within or not any(inside.isdisjoint(s) for s in cert.sets):
        raise PreconditionError("U must contain one bramble set and avoid another")

    cut = [
        (u, v, m) if u in inside else (v, u, m)
        for u, v, m in G.edges()
        if (u in inside) != (v in inside)
    ]
    shore = {x for x, _, _ in cut}
    traces = {i: shore.intersection(cert.sets[i]) for i in within}
    anchor = next(i for i in within if not any(traces[j] < traces[i] for j in within))
    anchor_set = set(cert.sets[anchor])
    base = sorted(traces[anchor])

    witness = [base[k % len(base)] for k in range(cert.r)]
    for x, y, m in cut:
        witness.extend([y if x in anchor_set else x] * m)
    witness.sort()

    hits_all = r_hits(witness, cert.sets, cert.r)
    if not hits_all:
        logger.warning(f"Shore multiset {witness} does not {cert.r}-hit every bramble set")
    return ShoreHittingSet(
        witness=tuple(witness),
        cut_size=sum(m for _, _, m in cut),
        anchor=anchor,
        hits_all=hits_all,
    )

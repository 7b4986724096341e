"""Divisors, chip-firing, Dhar burning, reduced divisors and Baker-Norine rank.

A divisor is an integer chip count per vertex; negative counts are debt.
Firing a set ``U`` sends one chip along every edge leaving ``U``, which is
``D - Δ·1_U`` in Laplacian terms. Everything here is a pure function of its
arguments.

The hot loops (burning, reduction, rank) work on plain lists indexed by
vertex and the graph's cached neighbor lists; numpy is only used where a
whole Laplacian product is wanted.
"""

import logging
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, combinations_with_replacement
from math import comb

import networkx as nx
import numpy as np

from chipfire.errors import InvalidInputError, PreconditionError
from chipfire.graph import Multigraph, laplacian

logger = logging.getLogger(__name__)

Neighbors = tuple[tuple[tuple[int, int], ...], ...]


@dataclass(frozen=True)
class Divisor:
    """Chip vector ``chips[v] = D(v)``."""

    chips: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "chips", tuple(int(c) for c in self.chips))

    @classmethod
    def zero(cls, n: int) -> "Divisor":
        return cls((0,) * n)

    @classmethod
    def from_multiset(cls, n: int, vertices: Iterable[int]) -> "Divisor":
        """Divisor with one chip per occurrence of a vertex in ``vertices``."""
        chips = [0] * n
        for v in vertices:
            if not 0 <= v < n:
                raise InvalidInputError(f"vertex {v} out of range for {n} vertices")
            chips[v] += 1
        return cls(tuple(chips))

    @classmethod
    def parse(cls, text: str) -> "Divisor":
        """Parse ``"1 1 1 0"`` (spaces or commas, optional brackets)."""
        cleaned = text.strip().strip("[]").replace(",", " ")
        try:
            return cls(tuple(int(x) for x in cleaned.split()))
        except ValueError:
            raise InvalidInputError(f"divisor is not a list of integers: {text!r}")

    @property
    def degree(self) -> int:
        return sum(self.chips)

    def is_effective(self) -> bool:
        return all(c >= 0 for c in self.chips)

    def __len__(self) -> int:
        return len(self.chips)

    def __getitem__(self, v: int) -> int:
        return self.chips[v]

    def __iter__(self) -> Iterator[int]:
        return iter(self.chips)

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor(tuple(a + b for a, b in zip(self.chips, other.chips, strict=True)))

    def __sub__(self, other: "Divisor") -> "Divisor":
        return Divisor(tuple(a - b for a, b in zip(self.chips, other.chips, strict=True)))

    def __neg__(self) -> "Divisor":
        return Divisor(tuple(-c for c in self.chips))

    def __str__(self) -> str:
        return " ".join(str(c) for c in self.chips)


@dataclass(frozen=True)
class FiringScript:
    """How many times each vertex fires; ``D' = D - Δf``."""

    f: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "f", tuple(int(x) for x in self.f))

    @classmethod
    def zero(cls, n: int) -> "FiringScript":
        return cls((0,) * n)

    @classmethod
    def indicator(cls, n: int, U: Iterable[int]) -> "FiringScript":
        f = [0] * n
        for v in U:
            f[v] = 1
        return cls(tuple(f))

    def __add__(self, other: "FiringScript") -> "FiringScript":
        return FiringScript(tuple(a + b for a, b in zip(self.f, other.f, strict=True)))

    def __len__(self) -> int:
        return len(self.f)

    def is_zero(self) -> bool:
        return not any(self.f)


class BurnOutcome(str, Enum):
    FOUND = "found"
    NONE = "none"


@dataclass(frozen=True)
class BurnReport:
    """Result of the modified burning algorithm.

    ``first_pass_components`` are the connected pieces burned before the fire
    first stabilizes (the flammable components), each as a sorted tuple.
    """

    outcome: BurnOutcome
    result: Divisor | None
    script: FiringScript
    first_pass_components: tuple[tuple[int, ...], ...] = field(default=())

    @property
    def found(self) -> bool:
        return self.outcome is BurnOutcome.FOUND


# -------------------------------------------------------------------
#   Divisor helpers
# -------------------------------------------------------------------


def _check_length(G: Multigraph, D: Divisor | FiringScript) -> None:
    if len(D) != G.n:
        raise InvalidInputError(f"vector has length {len(D)}, graph has {G.n} vertices")


def degree(D: Divisor) -> int:
    return D.degree


def support(D: Divisor) -> frozenset[int]:
    return frozenset(v for v, c in enumerate(D.chips) if c > 0)


def positive_part(D: Divisor) -> Divisor:
    return Divisor(tuple(max(c, 0) for c in D.chips))


def negative_part(D: Divisor) -> Divisor:
    """``D⁻`` with ``D = D⁺ - D⁻``; non-negative."""
    return Divisor(tuple(max(-c, 0) for c in D.chips))


def multi_support(D: Divisor) -> tuple[int, ...]:
    """Each vertex repeated ``D(v)`` times, ascending. Only defined for effective divisors."""
    if not D.is_effective():
        raise InvalidInputError("multi-support needs an effective divisor")
    return tuple(v for v, c in enumerate(D.chips) for _ in range(c))


def scale(D: Divisor, k: int) -> Divisor:
    """The divisor ``kD``."""
    return Divisor(tuple(k * c for c in D.chips))


def effective_divisors(n: int, d: int) -> Iterator[tuple[int, ...]]:
    """All effective degree-``d`` chip vectors, in lexicographic multiset order."""
    for combo in combinations_with_replacement(range(n), d):
        chips = [0] * n
        for v in combo:
            chips[v] += 1
        yield tuple(chips)


def multiplicity_free_divisors(n: int, d: int) -> Iterator[tuple[int, ...]]:
    """All 0/1 chip vectors of degree ``d``, in lexicographic subset order."""
    for combo in combinations(range(n), d):
        chips = [0] * n
        for v in combo:
            chips[v] = 1
        yield tuple(chips)


def count_effective(n: int, d: int) -> int:
    return comb(n + d - 1, d)


# -------------------------------------------------------------------
#   Firing
# -------------------------------------------------------------------


def _fire_into(nbrs: Neighbors, chips: list[int], W: set[int] | frozenset[int], times: int = 1) -> None:
    for v in W:
        for u, m in nbrs[v]:
            if u not in W:
                chips[v] -= times * m
                chips[u] += times * m


def fire_set(G: Multigraph, D: Divisor, U: Iterable[int]) -> Divisor:
    """``D - Δ·1_U``. Debt is allowed; the degree is unchanged."""
    _check_length(G, D)
    members = frozenset(U)
    for v in members:
        if not 0 <= v < G.n:
            raise InvalidInputError(f"vertex {v} out of range")
    chips = list(D.chips)
    _fire_into(G.neighbors, chips, members)
    return Divisor(tuple(chips))


def apply_script(G: Multigraph, D: Divisor, f: FiringScript) -> Divisor:
    """``D - Δf``."""
    _check_length(G, D)
    _check_length(G, f)
    result = np.asarray(D.chips, dtype=np.int64) - laplacian(G) @ np.asarray(f.f, dtype=np.int64)
    return Divisor(tuple(int(x) for x in result))


# -------------------------------------------------------------------
#   Burning
# -------------------------------------------------------------------


def _stabilize(
    nbrs: Neighbors, chips: Sequence[int], W: set[int], reverse: bool = False
) -> set[int]:
    """Remove burning vertices from ``W`` until every survivor can hold off the fire.

    A vertex burns when its chips are fewer than its edges into the burnt
    part. Vertices are scanned in ascending (or descending) order each pass.
    """
    changed = True
    while changed and W:
        changed = False
        for v in sorted(W, reverse=reverse):
            burning = sum(m for u, m in nbrs[v] if u not in W)
            if chips[v] < burning:
                W.discard(v)
                changed = True
    return W


def dhar_burn(
    G: Multigraph, D: Divisor, ignited: Iterable[int], reverse: bool = False
) -> frozenset[int]:
    """Unburnt set once a fire lit at ``ignited`` has stopped spreading.

    The result is the unique maximal set that can fire without a vertex
    outside ``ignited`` dropping below zero, so the scan order does not matter.
    """
    _check_length(G, D)
    W = set(G.vertices) - set(ignited)
    return frozenset(_stabilize(G.neighbors, D.chips, W, reverse=reverse))


def _components(G: Multigraph, vertices: Iterable[int]) -> tuple[tuple[int, ...], ...]:
    parts = nx.connected_components(G.simple_graph.subgraph(vertices))
    return tuple(sorted(tuple(sorted(c)) for c in parts))


def mdba(G: Multigraph, D: Divisor) -> BurnReport:
    """Modified Dhar burning: find an effective divisor equivalent to ``D`` or prove none exists.

    Fire starts on every vertex in debt. When it stabilizes the unburnt set
    ``W`` fires and the process repeats; if everything burns, ``D`` is not
    winnable.
    """
    _check_length(G, D)
    nbrs = G.neighbors
    chips = list(D.chips)
    script = [0] * G.n
    first_pass: tuple[tuple[int, ...], ...] | None = None
    rounds = 0
    while True:
        if all(c >= 0 for c in chips):
            return BurnReport(
                outcome=BurnOutcome.FOUND,
                result=Divisor(tuple(chips)),
                script=FiringScript(tuple(script)),
                first_pass_components=first_pass or (),
            )
        W = _stabilize(nbrs, chips, {v for v in G.vertices if chips[v] >= 0})
        if first_pass is None:
            first_pass = _components(G, set(G.vertices) - W)
        if not W:
            logger.debug(f"MDBA: whole graph burned after {rounds} firing rounds")
            return BurnReport(
                outcome=BurnOutcome.NONE,
                result=None,
                script=FiringScript(tuple(script)),
                first_pass_components=first_pass,
            )
        _fire_into(nbrs, chips, W)
        for v in W:
            script[v] += 1
        rounds += 1


# -------------------------------------------------------------------
#   Reduced divisors and winnability
# -------------------------------------------------------------------


def _reduce(
    nbrs: Neighbors, valences: Sequence[int], chips: list[int], q: int, script: list[int] | None = None
) -> None:
    """Turn ``chips`` into its q-reduced form in place, accumulating the firing script."""
    n = len(chips)
    if n == 1:
        return
    # Debt off q is cleared by borrowing; borrowing never happens at q, so it terminates.
    pending = True
    while pending:
        pending = False
        for v in range(n):
            if v != q and chips[v] < 0:
                k = -(chips[v] // valences[v])
                chips[v] += k * valences[v]
                for u, m in nbrs[v]:
                    chips[u] -= k * m
                if script is not None:
                    script[v] -= k
                pending = True
    # Now burn from q and fire the unburnt set as often as it legally can.
    while True:
        W = _stabilize(nbrs, chips, set(range(n)) - {q})
        if not W:
            return
        k = min(
            chips[v] // out
            for v in W
            if (out := sum(m for u, m in nbrs[v] if u not in W)) > 0
        )
        _fire_into(nbrs, chips, W, times=k)
        if script is not None:
            for v in W:
                script[v] += k


def q_reduce(G: Multigraph, D: Divisor, q: int) -> tuple[Divisor, FiringScript]:
    """The unique q-reduced divisor equivalent to ``D``, with the script that reaches it."""
    _check_length(G, D)
    if not 0 <= q < G.n:
        raise InvalidInputError(f"vertex {q} out of range")
    chips = list(D.chips)
    script = [0] * G.n
    _reduce(G.neighbors, G.valences, chips, q, script)
    # Normalize so the script is zero at q (constant scripts fire nothing).
    shift = script[q]
    return Divisor(tuple(chips)), FiringScript(tuple(s - shift for s in script))


def is_q_reduced(G: Multigraph, D: Divisor, q: int) -> bool:
    """Effective off ``q`` and no nonempty set avoiding ``q`` can fire legally."""
    _check_length(G, D)
    if any(c < 0 for v, c in enumerate(D.chips) if v != q):
        return False
    return not dhar_burn(G, D, [q])


def _winnable(nbrs: Neighbors, valences: Sequence[int], chips: list[int]) -> bool:
    _reduce(nbrs, valences, chips, 0)
    return chips[0] >= 0


def is_winnable(G: Multigraph, D: Divisor) -> bool:
    """True iff some effective divisor is equivalent to ``D`` (reduction at vertex 0)."""
    _check_length(G, D)
    if D.degree < 0:
        return False
    return _winnable(G.neighbors, G.valences, list(D.chips))


@dataclass(frozen=True)
class ChainStep:
    fired: frozenset[int]
    divisor: Divisor


def reduction_chain(G: Multigraph, D: Divisor, q: int) -> list[ChainStep]:
    """Nested sets ``U_1 ⊆ U_2 ⊆ ... ⊆ V∖{q}`` whose successive firing takes an
    effective ``D`` to its q-reduced form through effective divisors.

    The sets are the level sets of the reducing script, highest level first.
    """
    _check_length(G, D)
    if not D.is_effective():
        raise PreconditionError("reduction chain needs an effective divisor")
    _, script = q_reduce(G, D, q)
    top = max(script.f)
    steps = []
    current = D
    for level in range(top, 0, -1):
        U = frozenset(v for v, x in enumerate(script.f) if x >= level)
        current = fire_set(G, current, U)
        steps.append(ChainStep(fired=U, divisor=current))
    return steps


# -------------------------------------------------------------------
#   Rank
# -------------------------------------------------------------------


def find_unwinnable_debt(G: Multigraph, D: Divisor, r: int) -> Divisor | None:
    """Lexicographically first effective ``E`` of degree ``r`` with ``D - E`` unwinnable.

    This is the second player's winning move in the r-th gonality game, or
    None when ``D`` survives every placement of ``r`` units of debt.
    """
    _check_length(G, D)
    if r < 0:
        raise PreconditionError(f"debt degree must be non-negative, got {r}")
    nbrs, valences = G.neighbors, G.valences
    base = D.chips
    for combo in combinations_with_replacement(range(G.n), r):
        chips = list(base)
        for v in combo:
            chips[v] -= 1
        if sum(chips) < 0 or not _winnable(nbrs, valences, chips):
            return Divisor.from_multiset(G.n, combo)
    return None


def rank_at_least(G: Multigraph, D: Divisor, r: int) -> bool:
    """True iff ``rank(D) >= r``; stops at the first debt placement that wins."""
    if r < 0:
        raise PreconditionError(f"rank target must be non-negative, got {r}")
    _check_length(G, D)
    if D.degree < r:
        return False
    return find_unwinnable_debt(G, D, r) is None


def rank(G: Multigraph, D: Divisor) -> int:
    """Baker-Norine rank: -1 if unwinnable, else the largest r every degree-r debt can be paid."""
    _check_length(G, D)
    if not is_winnable(G, D):
        return -1
    r = 0
    while rank_at_least(G, D, r + 1):
        r += 1
    return r

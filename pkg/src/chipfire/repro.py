"""Named reproductions: fixed computations with known answers.

Each entry records the expected value and where it comes from. ``run``
returns a :class:`~chipfire.reports.ReproResult`; a budget that runs out is
an error, never a mismatch.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

from chipfire.certificates import scramble_order, vertex_scramble
from chipfire.divisors import Divisor, rank_at_least
from chipfire.errors import BudgetExceededError, InvalidInputError
from chipfire.families import bipartite_extension, complete_bipartite, crown, cycle, generalized_banana
from chipfire.gonality import SearchReport, alpha_r, gonality, mf_gonality
from chipfire.graph import Multigraph, edge_connectivity
from chipfire.reports import ReproResult

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunOptions:
    threads: int = 1
    budget: float | None = None
    chunk_size: int = 512


Outcome = tuple[int | None, dict[str, Any]]


@dataclass(frozen=True)
class Reproduction:
    name: str
    quantity: str
    expected: int
    provenance: str
    compute: Callable[[RunOptions], Outcome]
    # detail values that must also come out as stated
    checks: dict[str, int] = field(default_factory=dict)


def matched_pair_divisor(half: int, i: int = 0) -> Divisor:
    """One chip everywhere on ``Cr_{2*half}`` except the matched pair ``i``, ``half + i``."""
    return Divisor(tuple(0 if v in (i, half + i) else 1 for v in range(2 * half)))


def _settled(report: SearchReport, label: str) -> Outcome:
    if report.budget_exceeded:
        raise BudgetExceededError(f"{label}: budget exceeded after {report.elapsed:.1f}s")
    exhausted = [{"degree": d, "candidates": c} for d, c in report.degrees_exhausted]
    return report.minimum_degree, {
        "witness": list(report.witness) if report.witness is not None else None,
        "degrees_exhausted": exhausted,
        "strategy": report.strategy,
    }


def _search_options(opts: RunOptions) -> dict[str, Any]:
    return {"threads": opts.threads, "chunk_size": opts.chunk_size}


def _c4_gon2(opts: RunOptions) -> Outcome:
    return _settled(gonality(cycle(4), 2, opts.budget, **_search_options(opts)), "c4-gon2")


def _crown10_alpha2(opts: RunOptions) -> Outcome:
    report = alpha_r(crown(10), 2)
    return report.alpha, {"witness": list(report.witness)}


def _crown10_gon2(opts: RunOptions) -> Outcome:
    # Descending from the independence bound: a witness at 8, then degree 7 exhausted.
    report = gonality(crown(10), 2, opts.budget, strategy="descending", **_search_options(opts))
    return _settled(report, "crown10-gon2")


def _crown10_matched_pair(opts: RunOptions) -> Outcome:
    D = matched_pair_divisor(5)
    return int(rank_at_least(crown(10), D, 2)), {"divisor": list(D), "degree": D.degree}


def _banana_gon2(opts: RunOptions) -> Outcome:
    G = generalized_banana(3, [6, 6])
    value, details = _settled(gonality(G, 2, opts.budget, **_search_options(opts)), "banana-cor53")
    order = scramble_order(G, vertex_scramble(G, 2))
    details["vertex_scramble_order"] = order.order
    details["edge_connectivity"] = edge_connectivity(G)
    return value, details


def _extension(G: Multigraph) -> Multigraph:
    extended, _ = bipartite_extension(G)
    return extended


def _k44_extension_alpha2(opts: RunOptions) -> Outcome:
    G = complete_bipartite(4, 4)
    return alpha_r(_extension(G), 2).alpha, {"original_alpha": alpha_r(G, 2).alpha}


def _crown10_extension_alpha2(opts: RunOptions) -> Outcome:
    G = crown(10)
    return alpha_r(_extension(G), 2).alpha, {"original_alpha": alpha_r(G, 2).alpha}


def _mf_extension(G: Multigraph, label: str, opts: RunOptions) -> Outcome:
    extended = _extension(G)
    report = mf_gonality(extended, 2, opts.budget, strategy="descending", **_search_options(opts))
    value, details = _settled(report, label)
    details["vertices"] = extended.n
    return value, details


def _k44_mf_extension(opts: RunOptions) -> Outcome:
    return _mf_extension(complete_bipartite(4, 4), "k44-mf-extension", opts)


def _crown10_mf_extension(opts: RunOptions) -> Outcome:
    return _mf_extension(crown(10), "crown10-mf-extension", opts)


REPRODUCTIONS: dict[str, Reproduction] = {
    r.name: r
    for r in [
        Reproduction(
            "c4-gon2",
            "gon_2(C4)",
            3,
            "second gonality of the 4-cycle; the independence bound 4 - 1 is not tight here",
            _c4_gon2,
        ),
        Reproduction(
            "crown10-alpha2",
            "alpha_2(Cr10)",
            2,
            "only matched pairs of the crown graph are more than 2 apart",
            _crown10_alpha2,
        ),
        Reproduction(
            "crown10-gon2",
            "gon_2(Cr10)",
            8,
            "crown graph on 10 vertices: 10 - alpha_2 = 8, no degree-7 divisor has rank 2",
            _crown10_gon2,
        ),
        Reproduction(
            "crown10-matched-pair",
            "rank(D) >= 2 for the matched-pair divisor on Cr10",
            1,
            "all ones except one matched pair; degree 8 and rank at least 2",
            _crown10_matched_pair,
        ),
        Reproduction(
            "banana-cor53",
            "gon_2(banana(3, [6, 6]))",
            6,
            "6-edge-connected banana graph on 3 vertices: vertex scramble order = gon_2 = 2n",
            _banana_gon2,
            checks={"vertex_scramble_order": 6},
        ),
        Reproduction(
            "k44-extension-alpha2",
            "alpha_2 of the bipartite extension of K4,4",
            1,
            "extension keeps alpha_2 of the original graph",
            _k44_extension_alpha2,
            checks={"original_alpha": 1},
        ),
        Reproduction(
            "crown10-extension-alpha2",
            "alpha_2 of the bipartite extension of Cr10",
            2,
            "extension keeps alpha_2 of the original graph",
            _crown10_extension_alpha2,
            checks={"original_alpha": 2},
        ),
        Reproduction(
            "k44-mf-extension",
            "mfgon_2 of the bipartite extension of K4,4",
            15,
            "2|V(G)| - alpha_2(G) = 16 - 1; all degree-14 subsets exhausted",
            _k44_mf_extension,
        ),
        Reproduction(
            "crown10-mf-extension",
            "mfgon_2 of the bipartite extension of Cr10",
            18,
            "2|V(G)| - alpha_2(G) = 20 - 2; all 1140 degree-17 subsets exhausted",
            _crown10_mf_extension,
        ),
    ]
}


def run(name: str, opts: RunOptions | None = None) -> ReproResult:
    if name not in REPRODUCTIONS:
        raise InvalidInputError(
            f"unknown reproduction {name!r}; choose from {', '.join(REPRODUCTIONS)}"
        )
    repro = REPRODUCTIONS[name]
    computed, details = repro.compute(opts or RunOptions())
    failed = [key for key, want in repro.checks.items() if details.get(key) != want]
    match = computed == repro.expected and not failed
    if match:
        logger.info(f"{name}: {repro.quantity} = {computed} as expected")
    elif computed != repro.expected:
        logger.warning(f"{name}: {repro.quantity} = {computed}, expected {repro.expected}")
    for key in failed:
        logger.warning(f"{name}: {key} = {details.get(key)}, expected {repro.checks[key]}")
    return ReproResult(
        name=name,
        quantity=repro.quantity,
        expected=repro.expected,
        computed=computed,
        match=match,
        provenance=repro.provenance,
        details=details,
        failed_checks=failed,
    )
